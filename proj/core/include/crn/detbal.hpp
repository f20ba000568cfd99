#pragma once

// Deterministic mass-action kinetics: rates, drift, classification of a
// concentration vector against the four graphical balance conditions,
// balanced-equilibrium solvers and a fixed-step integrator.

#include <cstdint>
#include <optional>
#include <vector>

#include "crn/graph.hpp"
#include "crn/model.hpp"

namespace crn {

inline constexpr double kDefaultTol = 1e-9;

/// kappa * c^y, and 0 everywhere if any coordinate of c is negative.
std::vector<double> det_rates(const MassActionSystem& sys, const DetState& c);

/// sum over reactions of (y' - y) * rate.
std::vector<double> drift(const MassActionSystem& sys, const DetState& c);

/// Holds iff ||drift||_inf <= tol * (1 + max rate).
Verdict is_equilibrium(const MassActionSystem& sys, const DetState& c, double tol = kDefaultTol);

/// Reactions grouped by reaction vector, with xi and -xi merged. The
/// representative `xi` has its first nonzero entry positive; `forward`
/// holds reactions with vector xi, `backward` those with -xi.
struct ReactionVectorClass {
  IntVector xi;
  std::vector<std::size_t> forward;
  std::vector<std::size_t> backward;
};

std::vector<ReactionVectorClass> reaction_vector_classes(const ReactionNetwork& net);

/// Cycles and reaction-vector classes reused across many classifications.
struct BalanceStructure {
  std::vector<DirectedCycle> cycles;
  std::vector<ReactionVectorClass> rv_classes;

  static BalanceStructure of(const ReactionNetwork& net, const CycleOptions& opts = {});
};

struct StateBalanceReport {
  Verdict rb;
  Verdict cb;
  Verdict rvb;
  Verdict cyb;
  Verdict is_equilibrium;
  double drift_norm = 0.0;
};

/// Sums are compared with balance_close; cycle products relatively,
/// |F - B| <= tol * max(F, B), since c cancels out of them.
StateBalanceReport classify_state(const MassActionSystem& sys, const DetState& c,
                                  double tol = kDefaultTol);
StateBalanceReport classify_state(const MassActionSystem& sys, const BalanceStructure& structure,
                                  const DetState& c, double tol = kDefaultTol);

/// Rate-constant cycle condition: for every directed cycle the reverse cycle
/// exists and the two kappa products agree (compared in log space, 1e-9).
bool system_cycle_balanced(const MassActionSystem& sys, const CycleOptions& opts = {});

/// Positive state with kappa_fwd c^y = kappa_bwd c^y' for all reversible
/// pairs, if the log-linear system is consistent. Throws NotReversible.
std::optional<DetState> solve_reaction_balanced(const MassActionSystem& sys);

/// Positive complex balanced state, if one exists. Throws NotWeaklyReversible
/// and NumericalRankFailure.
std::optional<DetState> solve_complex_balanced(const MassActionSystem& sys);

struct RvbSearchOptions {
  double lower = 1e-2;   // start box, per coordinate
  double upper = 1e2;
  std::size_t starts = 32;
  std::size_t max_iter = 200;
  double residual_tol = 1e-10;
  double dedup_distance = 1e-6;
};

/// Relative residual of every reaction-vector class at c:
/// (forward - backward) / (forward + backward), 0 when both vanish.
std::vector<double> rvb_residuals(const MassActionSystem& sys,
                                  const std::vector<ReactionVectorClass>& classes,
                                  const DetState& c);

/// Multi-start damped Gauss-Newton in log coordinates. Not exhaustive:
/// the result is whatever the starts converged to, verified and deduplicated.
std::vector<DetState> solve_rvb(const MassActionSystem& sys, const RvbSearchOptions& opts = {});

struct TrajectoryPoint {
  double t = 0.0;
  DetState state;
};

/// Classical RK4 with fixed step. Every `record_every`-th step is stored,
/// plus the final point. Throws NonFiniteState on divergence.
std::vector<TrajectoryPoint> integrate(const MassActionSystem& sys, const DetState& c0,
                                       double t_end, double dt = 1e-3,
                                       std::size_t record_every = 1);

bool same_compatibility_class(const ReactionNetwork& net, const DetState& c1, const DetState& c2,
                              double tol = kDefaultTol);

}  // namespace crn
