#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "crn/error.hpp"
#include "crn/parser.hpp"
#include "crn/ssa.hpp"

namespace crn::cli {

std::string_view to_string(ArrowStatus s) noexcept {
  switch (s) {
    case ArrowStatus::Verified: return "verified";
    case ArrowStatus::Violated: return "violated";
    case ArrowStatus::NotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

bool SystemReport::any_violated() const {
  return std::any_of(implications.begin(), implications.end(),
                     [](const Implication& i) { return i.status == ArrowStatus::Violated; });
}

namespace {

constexpr double kProductFormTv = 1e-10;

// Collects arrow outcomes in a fixed order.
class ArrowBook {
 public:
  void declare(std::string id, std::string statement) {
    index_[id] = arrows_.size();
    arrows_.push_back({std::move(id), std::move(statement), ArrowStatus::NotApplicable, 0, {}});
  }

  // Records one instance whose hypothesis held; `conclusion` is the check.
  void record(const std::string& id, bool conclusion, const std::string& context) {
    auto& a = arrows_.at(index_.at(id));
    ++a.instances;
    if (!conclusion) {
      if (a.status != ArrowStatus::Violated) a.detail = context;
      a.status = ArrowStatus::Violated;
    } else if (a.status == ArrowStatus::NotApplicable) {
      a.status = ArrowStatus::Verified;
    }
  }

  std::vector<Implication> take() { return std::move(arrows_); }

 private:
  std::vector<Implication> arrows_;
  std::map<std::string, std::size_t> index_;
};

bool holds(const Verdict& v) { return v.is_holds(); }

// Every active reaction has an active partner with the opposite vector.
bool opposing_pairs(const ReactionNetwork& sub) {
  for (const auto& cls : reaction_vector_classes(sub)) {
    if (cls.forward.empty() != cls.backward.empty()) return false;
  }
  return true;
}

int max_source_molecularity(const ReactionNetwork& net) {
  int out = 0;
  for (const auto& r : net.reactions()) out = std::max(out, net.complexes()[r.source].molecularity());
  return out;
}

std::string describe(const DiscreteState& x, const SpeciesTable& sp) { return format_state(x, sp); }

void check_state_arrows(ArrowBook& book, const MassActionSystem& sys, const NamedState& ns,
                        bool cyb_system) {
  const auto& r = ns.report;
  const std::string ctx = ns.role + " state " + format_state(ns.state, sys.network().species());
  if (holds(r.rb) || holds(r.cb) || holds(r.rvb)) {
    book.record("det.balanced_state_is_equilibrium", holds(r.is_equilibrium), ctx);
  }
  if (holds(r.rb)) {
    book.record("det.rb_implies_cb_rvb_cyb", holds(r.cb) && holds(r.rvb) && holds(r.cyb), ctx);
  }
  if (holds(r.cb) && holds(r.cyb)) book.record("det.cb_and_cyb_implies_rb", holds(r.rb), ctx);

  const std::vector<DetState> one{ns.state};
  const auto sub = active_subnetwork(sys, std::span<const DetState>(one));
  if (holds(r.rb)) book.record("det.necessary_conditions", is_reversible(sub), ctx + " (rb)");
  if (holds(r.cb)) book.record("det.necessary_conditions", is_weakly_reversible(sub), ctx + " (cb)");
  if (holds(r.rvb)) book.record("det.necessary_conditions", opposing_pairs(sub), ctx + " (rvb)");

  const bool positive =
      std::all_of(ns.state.values.begin(), ns.state.values.end(), [](double v) { return v > 0.0; });
  if (positive && r.cyb.status != Status::Undetermined) {
    book.record("det.cyb_state_matches_rate_condition", holds(r.cyb) == cyb_system, ctx);
  }
}

void check_component_arrows(ArrowBook& book, const MassActionSystem& sys, const DetSummary& det,
                            const ComponentAnalysis& ca) {
  if (!ca.exact || !ca.report || !ca.stationary) return;
  const auto& net = sys.network();
  const auto& m = *ca.report;
  const std::string ctx = "component of " + describe(ca.component.seed, net.species());

  if (holds(m.rb) || holds(m.cb) || holds(m.rvb)) {
    book.record("stoch.balanced_measure_is_stationary", holds(m.stationary), ctx);
  }
  if (holds(m.rb)) {
    book.record("stoch.rb_implies_cb_rvb_cyb", holds(m.cb) && holds(m.rvb) && holds(m.cyb), ctx);
  }
  if (holds(m.cb) && holds(m.cyb)) book.record("stoch.cb_and_cyb_implies_rb", holds(m.rb), ctx);

  const auto sub = active_subnetwork(sys, std::span<const DiscreteState>(ca.component.states));
  if (holds(m.rb)) book.record("stoch.necessary_conditions", is_reversible(sub), ctx + " (rb)");
  if (holds(m.cb)) book.record("stoch.necessary_conditions", is_weakly_reversible(sub), ctx + " (cb)");
  if (holds(m.rvb)) book.record("stoch.necessary_conditions", opposing_pairs(sub), ctx + " (rvb)");

  if (ca.active && ca.unisolvent && holds(m.cb) && holds(m.rvb)) {
    book.record("stoch.cb_and_rvb_implies_rb", holds(m.rb), ctx);
    book.record("bridge.stoch_cb_rvb_implies_det_rb", det.rb_state.has_value(), ctx);
  }

  if (ca.active) {
    book.record("bridge.rb", det.rb_state.has_value() == holds(m.rb), ctx);
    if (!det.cb_undecided) book.record("bridge.cb", det.cb_state.has_value() == holds(m.cb), ctx);
    book.record("bridge.cyb", det.cyb_system == holds(m.cyb), ctx);
  }

  if (det.cb_state && ca.stationary->normalized()) {
    const bool nonneg = std::all_of(ca.component.states.begin(), ca.component.states.end(),
                                    [](const DiscreteState& x) { return x.nonnegative(); });
    if (nonneg) {
      auto poisson = poisson_product(*det.cb_state, ca.component.states);
      const double tv = tv_distance(*ca.stationary, poisson);
      book.record("bridge.product_form", tv <= kProductFormTv,
                  ctx + " (TV " + format_double(tv) + ")");
    }
  }
}

}  // namespace

ComponentAnalysis analyze_component(const MassActionSystem& sys, const DiscreteState& seed,
                                    const Box& box, double tol, bool allow_truncated) {
  ComponentAnalysis ca;
  ca.component = communicating_class(sys, seed, box);
  const auto& states = ca.component.states;
  // Every reaction firing somewhere is not enough: reactions sharing a
  // reaction vector that never fire from the same state never constrain
  // each other, and the component balances for any rates.
  ca.active = sys.network().num_reactions() > 0 &&
              std::any_of(states.begin(), states.end(), [&](const DiscreteState& x) {
                const auto a = propensity(sys, x);
                return std::all_of(a.begin(), a.end(), [](double v) { return v > 0.0; });
              });
  ca.exact = ca.component.closed;
  if (ca.component.leaks) {
    ca.note = "not closed: the class leaks into other states";
    return ca;
  }
  if (ca.component.truncated && !allow_truncated) {
    ca.note = "truncated by the box";
    return ca;
  }
  StationaryOptions so;
  so.allow_truncated = allow_truncated;
  ca.stationary = stationary_distribution(sys, ca.component, so);
  if (ca.exact) {
    ca.report = classify_exact_measure(sys, *ca.stationary, tol);
  } else {
    ca.report = classify_measure(sys, *ca.stationary, box, tol);
    ca.note = "truncated by the box; reflecting boundary, interior equations only";
  }
  ca.unisolvent = support_is_unisolvent(std::span<const DiscreteState>(states),
                                        max_source_molecularity(sys.network()));
  return ca;
}

SystemReport analyze(const MassActionSystem& sys, const AnalyzeOptions& opts) {
  const auto& net = sys.network();
  SystemReport rep;

  auto& g = rep.graph;
  g.reversible = is_reversible(net);
  g.weakly_reversible = is_weakly_reversible(net);
  if (!net.empty()) g.deficiency = deficiency(net);
  g.linkage_classes = linkage_classes(net).size();
  g.stoich_dim = net.empty() ? 0 : stoichiometric_basis(net).dimension();
  g.cycles = simple_cycles(net).size();

  auto& det = rep.det;
  if (g.reversible && !net.empty()) det.rb_state = solve_reaction_balanced(sys);
  if (!g.weakly_reversible) {
    det.cb_note = "not weakly reversible";
  } else if (!net.empty()) {
    try {
      det.cb_state = solve_complex_balanced(sys);
      if (!det.cb_state) det.cb_note = "log-linear system inconsistent";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalRankFailure) throw;
      det.cb_note = e.what();
      det.cb_undecided = true;
    }
  }
  det.cyb_system = system_cycle_balanced(sys);
  det.rvb_states = solve_rvb(sys, opts.rvb);

  const auto structure = BalanceStructure::of(net);
  auto classify = [&](std::string role, const DetState& c) {
    det.classified.push_back({std::move(role), c, classify_state(sys, structure, c, opts.tol)});
  };
  if (det.rb_state) classify("rb", *det.rb_state);
  if (det.cb_state) classify("cb", *det.cb_state);
  for (const auto& c : det.rvb_states) classify("rvb", c);

  for (const auto& seed : opts.seeds) {
    rep.components.push_back(analyze_component(sys, seed, opts.box, opts.tol, true));
  }

  ArrowBook book;
  book.declare("det.balanced_state_is_equilibrium", "rb, cb or rvb state => equilibrium");
  book.declare("det.rb_implies_cb_rvb_cyb", "rb state => cb, rvb and cyb state");
  book.declare("det.cb_and_cyb_implies_rb", "cb and cyb state => rb state");
  book.declare("det.necessary_conditions",
               "rb => active network reversible; cb => weakly reversible; rvb => opposing vectors");
  book.declare("det.cyb_state_matches_rate_condition",
               "positive state is cyb iff the rate constants are cycle balanced");
  book.declare("det.system_rb_implies_cb_and_cyb", "rb system => cb system and cyb system");
  book.declare("det.system_cb_and_cyb_implies_rb", "cb system and cyb system => rb system");
  book.declare("stoch.balanced_measure_is_stationary", "rb, cb or rvb measure => stationary");
  book.declare("stoch.rb_implies_cb_rvb_cyb", "rb measure => cb, rvb and cyb measure");
  book.declare("stoch.cb_and_cyb_implies_rb", "cb and cyb measure => rb measure");
  book.declare("stoch.necessary_conditions",
               "rb => active network reversible; cb => weakly reversible; rvb => opposing vectors");
  book.declare("stoch.cb_and_rvb_implies_rb", "cb and rvb distribution on a unisolvent support => rb");
  book.declare("bridge.rb", "deterministic rb system <=> stochastic rb system");
  book.declare("bridge.cb", "deterministic cb system <=> stochastic cb system");
  book.declare("bridge.cyb", "deterministic cyb system <=> stochastic cyb system");
  book.declare("bridge.product_form", "cb equilibrium c => stationary distribution is c^x/x! normalized");
  book.declare("bridge.stoch_cb_rvb_implies_det_rb",
               "stochastic cb and rvb (unisolvent support) => deterministic rb system");

  for (const auto& ns : det.classified) check_state_arrows(book, sys, ns, det.cyb_system);
  if (det.rb_state) {
    book.record("det.system_rb_implies_cb_and_cyb", det.cb_state.has_value() && det.cyb_system,
                "rb state found");
  }
  if (det.cb_state && det.cyb_system) {
    book.record("det.system_cb_and_cyb_implies_rb", det.rb_state.has_value(), "cb state found");
  }
  for (const auto& ca : rep.components) check_component_arrows(book, sys, det, ca);

  rep.implications = book.take();
  return rep;
}

}  // namespace crn::cli
