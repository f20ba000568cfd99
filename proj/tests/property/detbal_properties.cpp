#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crn/detbal.hpp"
#include "crn/error.hpp"
#include "crn/graph.hpp"
#include "crn/parser.hpp"
#include "generators.hpp"

using namespace crn;
using namespace crn::testing;

namespace {

enum class Regime { Random, ReactionBalanced, ComplexBalanced, VectorBalanced };

struct Instance {
  MassActionSystem sys;
  DetState target;  // the state the rates were built around
  Regime regime;
};

// Reversible or weakly reversible network with rates chosen for `regime`.
std::optional<Instance> draw(Rng& rng, Regime regime) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    NetworkDraft d;
    d.species = static_cast<std::size_t>(rng.integer(1, 3));
    d.complexes = random_complexes(rng, d.species, static_cast<std::size_t>(rng.integer(3, 6)), 2);
    if (d.complexes.size() < 3) continue;
    const bool reversible = regime == Regime::ReactionBalanced || regime == Regime::VectorBalanced ||
                            (regime == Regime::Random && rng.chance(0.5));
    d.edges = reversible ? random_reversible_edges(rng, d.complexes.size(), 0.3)
                         : random_weakly_reversible_edges(rng, d.complexes.size());
    auto shape = realize(d, std::vector<double>(d.edges.size(), 1.0));
    if (!shape) continue;
    const auto& net = shape->network();
    auto c = random_positive_state(rng, net.num_species());
    std::vector<double> k;
    switch (regime) {
      case Regime::Random: k = random_rates(rng, net.num_reactions()); break;
      case Regime::ReactionBalanced: k = rates_reaction_balanced_at(rng, net, c); break;
      case Regime::ComplexBalanced: k = rates_complex_balanced_at(rng, net, c); break;
      case Regime::VectorBalanced: k = rates_rvb_at(rng, net, c); break;
    }
    return Instance{with_rates(*shape, std::move(k)), c, regime};
  }
  return std::nullopt;
}

bool holds(const Verdict& v) { return v.is_holds(); }

bool opposing_pairs(const ReactionNetwork& sub) {
  for (const auto& cls : reaction_vector_classes(sub)) {
    if (cls.forward.empty() != cls.backward.empty()) return false;
  }
  return true;
}

struct Counts {
  int balanced = 0;
  int rb = 0;
  int cb_and_cyb = 0;
  int cb = 0;
  int rvb = 0;
};

void check_theorems(const MassActionSystem& sys, const DetState& c, Counts& n) {
  const auto rep = classify_state(sys, c);
  CAPTURE(format_network(sys));
  if (holds(rep.rb) || holds(rep.cb) || holds(rep.rvb)) {
    ++n.balanced;
    CHECK(holds(rep.is_equilibrium));
  }
  if (holds(rep.rb)) {
    ++n.rb;
    CHECK(holds(rep.cb));
    CHECK(holds(rep.rvb));
    CHECK(holds(rep.cyb));
  }
  if (holds(rep.cb) && holds(rep.cyb)) {
    ++n.cb_and_cyb;
    CHECK(holds(rep.rb));
  }
  const std::vector<DetState> one{c};
  const auto sub = active_subnetwork(sys, std::span<const DetState>(one));
  if (holds(rep.rb)) CHECK(is_reversible(sub));
  if (holds(rep.cb)) {
    ++n.cb;
    CHECK(is_weakly_reversible(sub));
  }
  if (holds(rep.rvb)) {
    ++n.rvb;
    CHECK(opposing_pairs(sub));
  }
  for (const Verdict* v : {&rep.rb, &rep.cb, &rep.rvb, &rep.cyb, &rep.is_equilibrium}) {
    CHECK(v->witness.has_value() == v->is_fails());
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// RK4 step well inside the stability region, from a Gershgorin bound on the
// Jacobian of the mass-action drift at c.
double stable_step(const MassActionSystem& sys, const DetState& c) {
  const auto& net = sys.network();
  const auto rates = det_rates(sys, c);
  const std::size_t n = c.size();
  std::vector<double> jac(n * n, 0.0);
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& src = net.complexes()[net.reactions()[r].source].coeffs;
    const auto v = net.reaction_vector(r);
    for (std::size_t j = 0; j < n; ++j) {
      if (src[j] == 0) continue;
      const double d = rates[r] * src[j] / c[j];
      for (std::size_t i = 0; i < n; ++i) jac[i * n + j] += static_cast<double>(v[i]) * d;
    }
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(jac[i * n + j]);
    bound = std::max(bound, row);
  }
  return std::min(1e-2, 0.5 / std::max(bound, 1e-12));
}

}  // namespace

TEST_CASE("balanced states: equilibria, relations and necessary conditions") {
  Rng master(kMasterSeed ^ 0x20);
  Counts n;
  int drawn = 0;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = master.fork(static_cast<std::uint64_t>(i));
    auto inst = draw(rng, static_cast<Regime>(i % 4));
    if (!inst) continue;
    ++drawn;
    check_theorems(inst->sys, inst->target, n);
    check_theorems(inst->sys, random_positive_state(rng, inst->target.size()), n);
    // a boundary state, so inactive reactions are exercised too
    DetState edge = inst->target;
    edge[static_cast<std::size_t>(rng.integer(0, static_cast<int>(edge.size()) - 1))] = 0.0;
    check_theorems(inst->sys, edge, n);
  }
  CHECK(drawn == kInstances);
  MESSAGE("balanced=" << n.balanced << " rb=" << n.rb << " cb=" << n.cb << " rvb=" << n.rvb
                      << " cb&cyb=" << n.cb_and_cyb);
  CHECK(n.rb >= kInstances / 8);
  CHECK(n.cb >= kInstances / 4);
  CHECK(n.rvb >= kInstances / 4);
  CHECK(n.cb_and_cyb >= kInstances / 8);
}

TEST_CASE("cycle balance of a state is the same at every positive state") {
  Rng master(kMasterSeed ^ 0x21);
  int balanced_systems = 0;
  int unbalanced_systems = 0;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = master.fork(static_cast<std::uint64_t>(i));
    auto inst = draw(rng, static_cast<Regime>(i % 4));
    REQUIRE(inst);
    const bool system = system_cycle_balanced(inst->sys);
    (system ? balanced_systems : unbalanced_systems) += 1;
    const auto structure = BalanceStructure::of(inst->sys.network());
    for (int k = 0; k < 10; ++k) {
      auto c = random_positive_state(rng, inst->target.size(), 0.05, 20.0);
      CHECK(classify_state(inst->sys, structure, c).cyb.is_holds() == system);
    }
  }
  CHECK(balanced_systems > 20);
  CHECK(unbalanced_systems > 20);
}

TEST_CASE("solvers only return states that classify as requested") {
  Rng master(kMasterSeed ^ 0x22);
  int rb_found = 0;
  int cb_found = 0;
  int rvb_found = 0;
  RvbSearchOptions quick;
  quick.starts = 8;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = master.fork(static_cast<std::uint64_t>(i));
    auto inst = draw(rng, static_cast<Regime>(i % 4));
    REQUIRE(inst);
    const auto& sys = inst->sys;
    const auto& net = sys.network();
    if (is_reversible(net)) {
      if (auto c = solve_reaction_balanced(sys)) {
        ++rb_found;
        CHECK(classify_state(sys, *c).rb.is_holds());
      }
    } else {
      CHECK_THROWS_AS(solve_reaction_balanced(sys), Error);
    }
    if (auto c = solve_complex_balanced(sys)) {
      ++cb_found;
      CHECK(classify_state(sys, *c).cb.is_holds());
    }
    if (inst->regime == Regime::ReactionBalanced) CHECK(solve_reaction_balanced(sys).has_value());
    if (inst->regime == Regime::ComplexBalanced) CHECK(solve_complex_balanced(sys).has_value());
    for (const auto& c : solve_rvb(sys, quick)) {
      ++rvb_found;
      CHECK(classify_state(sys, c).rvb.is_holds());
      for (double v : c.values) CHECK(v > 0.0);
    }
  }
  CHECK(rb_found >= kInstances / 4);
  CHECK(cb_found >= kInstances / 4);
  CHECK(rvb_found >= kInstances / 4);
}

TEST_CASE("complex balanced systems converge to one balanced state per class") {
  Rng master(kMasterSeed ^ 0x23);
  int converged = 0;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = master.fork(static_cast<std::uint64_t>(i));
    auto inst = draw(rng, Regime::ComplexBalanced);
    REQUIRE(inst);
    const auto& sys = inst->sys;
    CAPTURE(format_network(sys));
    auto cb = solve_complex_balanced(sys);
    REQUIRE(cb);

    const auto basis = stoichiometric_basis(sys.network());
    const std::size_t n = inst->target.size();
    std::vector<DetState> limits;
    std::vector<DetState> starts;
    for (int s = 0; s < 5; ++s) starts.push_back(random_positive_state(rng, n, 0.3, 3.0));
    // a second start in the class of the first, to test uniqueness
    DetState twin = starts[0];
    for (const auto& v : basis.basis) {
      const double step = rng.uniform(-0.1, 0.1);
      for (std::size_t k = 0; k < n; ++k) twin[k] += step * static_cast<double>(v[k]);
    }
    const bool twin_ok = std::all_of(twin.values.begin(), twin.values.end(), [](double v) { return v > 0.05; });
    if (twin_ok) starts.push_back(twin);

    for (const auto& c0 : starts) {
      DetState c = c0;
      double drift_norm = 1.0;
      for (int chunk = 0; chunk < 4000; ++chunk) {
        const double dt = stable_step(sys, c);
        c = integrate(sys, c, 200 * dt, dt, 200).back().state;
        const auto rates = det_rates(sys, c);
        const double scale = 1.0 + *std::max_element(rates.begin(), rates.end());
        drift_norm = max_abs(drift(sys, c));
        if (drift_norm < 1e-13 * scale) break;
      }
      for (double v : c.values) CHECK(v > 0.0);
      CHECK(drift_norm < 1e-6);
      CHECK(classify_state(sys, c).cb.is_holds());
      CHECK(same_compatibility_class(sys.network(), c0, c, 1e-6));
      limits.push_back(c);
      converged += drift_norm < 1e-6;
    }
    if (twin_ok) {
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(limits.front()[k] - limits.back()[k]) < 1e-6);
    }
  }
  CHECK(converged >= 5 * kInstances);
}
