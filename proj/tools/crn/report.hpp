#pragma once

// Whole-system analysis behind `crn analyze`: graph facts, deterministic
// solvers, stationary distributions on chosen components, and the
// per-instance check of every implication between the balance notions.

#include <optional>
#include <string>
#include <vector>

#include "crn/detbal.hpp"
#include "crn/graph.hpp"
#include "crn/model.hpp"
#include "crn/stoch.hpp"

namespace crn::cli {

struct AnalyzeOptions {
  std::vector<DiscreteState> seeds;
  Box box;
  double tol = kDefaultTol;
  RvbSearchOptions rvb;
};

struct GraphSummary {
  bool reversible = true;
  bool weakly_reversible = true;
  std::optional<int> deficiency;  // absent for the empty network
  std::size_t linkage_classes = 0;
  std::size_t stoich_dim = 0;
  std::size_t cycles = 0;
};

struct NamedState {
  std::string role;  // "rb", "cb" or "rvb"
  DetState state;
  StateBalanceReport report;
};

struct DetSummary {
  std::optional<DetState> rb_state;
  std::optional<DetState> cb_state;
  std::string cb_note;  // why cb_state is absent, if it is
  bool cb_undecided = false;
  bool cyb_system = false;
  std::vector<DetState> rvb_states;
  std::vector<NamedState> classified;
};

struct ComponentAnalysis {
  ComponentResult component;
  bool active = false;      // some state of the component fires every reaction
  bool exact = false;       // closed, so the stationary solve is exact
  bool unisolvent = false;  // support hypothesis of the CB + RVB => RB theorem
  std::optional<Measure> stationary;
  std::optional<MeasureBalanceReport> report;
  std::string note;
};

enum class ArrowStatus { Verified, Violated, NotApplicable };

std::string_view to_string(ArrowStatus s) noexcept;

struct Implication {
  std::string id;
  std::string statement;
  ArrowStatus status = ArrowStatus::NotApplicable;
  std::size_t instances = 0;  // how many times the hypothesis was met
  std::string detail;         // first counterexample, if violated
};

struct SystemReport {
  GraphSummary graph;
  DetSummary det;
  std::vector<ComponentAnalysis> components;
  std::vector<Implication> implications;

  bool any_violated() const;
};

SystemReport analyze(const MassActionSystem& sys, const AnalyzeOptions& opts);

/// Stationary distribution of the component holding `seed`, classified
/// exactly if closed and on the box interior if truncated.
ComponentAnalysis analyze_component(const MassActionSystem& sys, const DiscreteState& seed,
                                    const Box& box, double tol, bool allow_truncated);

}  // namespace crn::cli
