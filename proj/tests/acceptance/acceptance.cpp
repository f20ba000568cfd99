// One PASS/FAIL line per acceptance criterion, with wall time. Exit status
// is nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "crn/detbal.hpp"
#include "crn/error.hpp"
#include "crn/graph.hpp"
#include "crn/parser.hpp"
#include "crn/ssa.hpp"
#include "crn/stoch.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace crn;
using namespace crn::testing;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string& name) { return std::string(CRN_CORPUS) + "/" + name; }
MassActionSystem load(const std::string& name) { return load_network(corpus(name)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// 1: triangle at (1,1) through the CLI
Outcome triangle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto r = run(std::string(CRN_EXE) + " classify-state " + corpus("triangle.crn") + " --state A=1,B=1 --tol 1e-9");
  const double t = seconds_since(t0);
  o.require(r.code == 0, "exit " + std::to_string(r.code));
  if (r.code != 0) return o;
  const auto rep = json::parse(r.out)["report"];
  const std::pair<const char*, const char*> want[] = {
      {"rb", "fails"}, {"cb", "fails"}, {"rvb", "holds"}, {"cyb", "holds"}};
  for (const auto& [key, status] : want) {
    o.require(rep[key]["status"] == status, std::string(key) + " is " + rep[key]["status"].get<std::string>());
  }
  o.require(t < 1.0, "took " + fmt(t) + " s");
  return o;
}

// 2: square at (1,1)
Outcome square() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto sys = load("square.crn");
  auto rep = classify_state(sys, DetState{{1.0, 1.0}});
  o.require(rep.cb.is_holds(), "cb");
  o.require(rep.rvb.is_holds(), "rvb");
  o.require(rep.cyb.is_fails(), "cyb");
  o.require(rep.rb.is_fails(), "rb");
  if (rep.cyb.witness) {
    const auto& w = *rep.cyb.witness;
    o.require(std::abs(std::max(w.lhs, w.rhs) - 16.0) < 1e-9 && std::abs(std::min(w.lhs, w.rhs) - 1.0) < 1e-9,
              "cycle products " + fmt(w.lhs) + " vs " + fmt(w.rhs));
  }
  o.require(!system_cycle_balanced(sys), "system_cycle_balanced");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "took " + fmt(t) + " s");
  return o;
}

// 3: three RVB equilibria at 1, 2, 3
Outcome three_equilibria() {
  Outcome o;
  auto sys = load("rvb_multistable.crn");
  auto found = solve_rvb(sys);
  o.require(found.size() == 3, std::to_string(found.size()) + " states");
  if (found.size() != 3) return o;
  for (std::size_t i = 0; i < 3; ++i) {
    o.require(std::abs(found[i][0] - static_cast<double>(i + 1)) <= 1e-8, "state " + fmt(found[i][0]));
    o.require(max_abs(drift(sys, found[i])) <= 1e-10, "drift at " + fmt(found[i][0]));
    o.require(same_compatibility_class(sys.network(), found[0], found[i]), "class");
  }
  return o;
}

// 4: B -> A, A + B -> 2B
Outcome absolute_concentration() {
  Outcome o;
  auto sys = load("acr.crn");
  const auto& sp = sys.network().species();
  for (int l : {2, 3, 5}) {
    auto c = parse_det_state("A=1,B=" + std::to_string(l - 1), sp);
    o.require(classify_state(sys, c, 1e-9).rvb.is_holds(), "rvb at l=" + std::to_string(l));
  }
  // positive points of the class z_A + z_B = 1
  double least = INFINITY;
  for (int k = 1; k <= 200; ++k) {
    const double a = k / 201.0;
    auto c = parse_det_state("A=" + format_double(a) + ",B=" + format_double(1.0 - a), sp);
    least = std::min(least, max_abs(drift(sys, c)));
  }
  o.require(least > 1e-6, "equilibrium on the grid (drift " + fmt(least) + ")");
  return o;
}

// 5: stochastic RVB without a deterministic RVB equilibrium
Outcome stochastic_rvb() {
  Outcome o;
  auto sys = load("stoch_rvb.crn");
  const auto box = Box::cube(1, 30);
  const auto comp = communicating_class(sys, DiscreteState{{0}}, box);
  StationaryOptions so;
  so.allow_truncated = true;
  const auto pi = stationary_distribution(sys, comp, so);
  std::vector<double> expected(26);
  double acc = 1.0;
  for (int x = 0; x <= 25; ++x) {
    expected[static_cast<std::size_t>(x)] = acc;
    acc /= 2.0 * x + 1.0;
  }
  // compare shapes: both normalized at x = 0
  const double base = pi(DiscreteState{{0}});
  double worst = 0.0;
  for (int x = 0; x <= 25; ++x) {
    const double got = pi(DiscreteState{{x}}) / base;
    worst = std::max(worst, std::abs(got - expected[static_cast<std::size_t>(x)]) / expected[static_cast<std::size_t>(x)]);
  }
  o.require(worst < 1e-6, "relative error " + fmt(worst));
  o.require(classify_measure(sys, pi, box).rvb.is_holds(), "rvb");
  o.require(solve_rvb(sys).empty(), "deterministic rvb state found");
  return o;
}

// 6: birth-death chain
Outcome birth_death() {
  Outcome o;
  auto sys = load("birth_death.crn");
  StationaryOptions so;
  so.allow_truncated = true;
  const auto small_box = Box::cube(1, 60);
  const auto small = stationary_distribution(sys, communicating_class(sys, DiscreteState{{0}}, small_box), so);
  const auto rep = classify_measure(sys, small, small_box);
  o.require(rep.rvb.is_holds(), "rvb");
  o.require(rep.rb.is_fails() && rep.rb.witness.has_value(), "rb fails with witness");
  o.require(rep.cyb.is_holds(), "cyb");
  const auto large = stationary_distribution(sys, communicating_class(sys, DiscreteState{{0}}, Box::cube(1, 80)), so);
  const double tv = tv_distance(small, large);
  o.require(tv < 1e-10, "TV between boxes " + fmt(tv));
  return o;
}

// 7: product form
Outcome product_form() {
  Outcome o;
  double slowest = 0.0;
  int checked = 0;
  auto check = [&](const MassActionSystem& sys, const DiscreteState& seed, const std::string& name) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto box = Box::cube(seed.size(), std::accumulate(seed.values.begin(), seed.values.end(), std::int64_t{0}));
    const auto comp = communicating_class(sys, seed, box);
    if (!comp.closed || comp.states.size() > 5000) {
      o.require(false, name + ": component not usable");
      return;
    }
    auto c = solve_complex_balanced(sys);
    if (!c) {
      o.require(false, name + ": no cb state");
      return;
    }
    const double tv = tv_distance(stationary_distribution(sys, comp), poisson_product(*c, comp.states));
    const double t = seconds_since(t0);
    slowest = std::max(slowest, t);
    o.require(tv <= 1e-10, name + ": TV " + fmt(tv));
    o.require(t < 10.0, name + ": took " + fmt(t) + " s");
    ++checked;
  };
  check(load("square.crn"), DiscreteState{{30, 10}}, "square");
  check(load("intro.crn"), DiscreteState{{20, 20, 0}}, "intro");

  Rng master(kMasterSeed ^ 0x70);
  int random = 0;
  for (std::uint64_t i = 0; random < 20 && i < 2000; ++i) {
    auto rng = master.fork(i);
    NetworkDraft d;
    d.species = static_cast<std::size_t>(rng.integer(2, 3));
    const int degree = rng.integer(1, 3);
    d.complexes = random_complexes_of_degree(rng, d.species, static_cast<std::size_t>(rng.integer(3, 5)), degree);
    if (d.complexes.size() < 3) continue;
    d.edges = random_weakly_reversible_edges(rng, d.complexes.size());
    auto sys = realize(d, random_rates(rng, d.edges.size()));
    if (!sys || deficiency(sys->network()) != 0) continue;
    DiscreteState seed;
    seed.values.assign(sys->network().num_species(), 0);
    for (int k = 0; k < degree * 6; ++k) ++seed.values[static_cast<std::size_t>(rng.integer(0, static_cast<int>(seed.size()) - 1))];
    check(*sys, seed, "random #" + std::to_string(i));
    ++random;
  }
  o.require(random == 20, "only " + std::to_string(random) + " random networks");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(checked) + " systems, slowest " + fmt(slowest) + " s";
  return o;
}

// 8: deterministic rb existence agrees with stochastic rb of the stationary distribution
Outcome rb_bridge() {
  Outcome o;
  Rng master(kMasterSeed ^ 0x80);
  int compared = 0;
  int agree = 0;
  int rb = 0;
  for (std::uint64_t i = 0; compared < 50 && i < 5000; ++i) {
    auto rng = master.fork(i);
    NetworkDraft d;
    d.species = static_cast<std::size_t>(rng.integer(2, 3));
    const int degree = rng.integer(1, 2);
    d.complexes = random_complexes_of_degree(rng, d.species, static_cast<std::size_t>(rng.integer(3, 5)), degree);
    if (d.complexes.size() < 3) continue;
    d.edges = random_reversible_edges(rng, d.complexes.size(), 0.6);
    auto shape = realize(d, std::vector<double>(d.edges.size(), 1.0));
    if (!shape) continue;
    const auto& net = shape->network();
    const std::size_t n = net.num_species();
    auto rates = compared % 2 == 0 ? rates_reaction_balanced_at(rng, net, random_positive_state(rng, n))
                                   : random_rates(rng, net.num_reactions());
    auto sys = with_rates(*shape, std::move(rates));
    DiscreteState seed;
    seed.values.assign(n, 0);
    const int total = degree * 5;
    for (int k = 0; k < total; ++k) ++seed.values[static_cast<std::size_t>(rng.integer(0, static_cast<int>(n) - 1))];
    ComponentResult comp;
    try {
      comp = communicating_class(sys, seed, Box::cube(n, total));
    } catch (const Error&) {
      continue;
    }
    if (!comp.closed) continue;
    // a state that fires every reaction at once
    const bool all_at_once = std::any_of(comp.states.begin(), comp.states.end(), [&](const DiscreteState& x) {
      const auto a = propensity(sys, x);
      return std::all_of(a.begin(), a.end(), [](double v) { return v > 0.0; });
    });
    if (!all_at_once) continue;
    const bool det = solve_reaction_balanced(sys).has_value();
    const bool stoch = classify_exact_measure(sys, stationary_distribution(sys, comp)).rb.is_holds();
    ++compared;
    agree += det == stoch;
    rb += det;
  }
  o.require(compared == 50, "only " + std::to_string(compared) + " systems");
  o.require(agree == compared, std::to_string(compared - agree) + " disagreements");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(agree) + "/" + std::to_string(compared) + " agree, " +
              std::to_string(rb) + " rb";
  return o;
}

// 9: six-complex network, components x_C = 1 and x_C = 2
Outcome six_complex() {
  Outcome o;
  auto sys = load("six_complex.crn");
  StationaryOptions so;
  so.allow_truncated = true;
  for (std::int64_t c : {1, 2}) {
    const Box box(DiscreteState{{0, 0, c}}, DiscreteState{{40, 40, c}});
    const auto comp = communicating_class(sys, DiscreteState{{0, 0, c}}, box);
    const auto pi = stationary_distribution(sys, comp, so);
    const auto rep = classify_measure(sys, pi, box);
    const std::string tag = "x_C=" + std::to_string(c) + ": ";
    if (c == 1) {
      o.require(rep.rvb.is_holds(), tag + "rvb");
    } else {
      o.require(rep.rvb.is_fails(), tag + "rvb");
    }
    o.require(rep.rb.is_fails(), tag + "rb");
  }
  return o;
}

// 10: property suites plus corpus analysis, under five minutes
Outcome suites() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto props = run(std::string(CRN_PROPERTY_TESTS));
  o.require(props.code == 0, "property suites exit " + std::to_string(props.code));
  const std::pair<const char*, const char*> cases[] = {
      {"acr.crn", "--seed-state A=2,B=2"},
      {"birth_death.crn", "--seed-state A=5 --box 60"},
      {"cycle3.crn", "--seed-state A=4"},
      {"dimer.crn", "--seed-state A=6"},
      {"intro.crn", "--seed-state A=3,B=3"},
      {"intro_rates.crn", "--seed-state A=3,B=3"},
      {"isomer.crn", "--seed-state A=4"},
      {"poisson.crn", "--seed-state A=0 --box 60"},
      {"rvb_multistable.crn", "--seed-state A=2 --box 60"},
      {"six_complex.crn", "--seed-state A=0,B=0,C=1 --box 40"},
      {"square.crn", "--seed-state A=3,B=1"},
      {"stoch_rvb.crn", "--seed-state A=0 --box 30"},
      {"triangle.crn", "--seed-state A=2,B=2"},
  };
  for (const auto& [file, args] : cases) {
    auto r = run(std::string(CRN_EXE) + " analyze " + corpus(file) + " " + args);
    o.require(r.code == 0, std::string(file) + " exit " + std::to_string(r.code));
    o.require(r.out.find("\"violated\"") == std::string::npos, std::string(file) + " violated");
  }
  const double t = seconds_since(t0);
  o.require(t < 300.0, "took " + fmt(t) + " s");
  return o;
}

// 11: SSA on 0 <-> A against Poisson(1)
Outcome ssa_poisson() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto sys = load("poisson.crn");
  SsaConfig cfg;
  cfg.seed = 20240611;
  cfg.t_end = 1e5;
  const auto occ = occupancy_measure(sys, DiscreteState{{0}}, cfg);
  std::int64_t top = 0;
  for (const auto& [x, w] : occ.weights()) top = std::max(top, x[0]);
  const auto pmf = truncated_poisson(1.0, static_cast<int>(top) + 10);
  std::map<DiscreteState, double> ref;
  for (std::size_t k = 0; k < pmf.size(); ++k) ref[DiscreteState{{static_cast<std::int64_t>(k)}}] = pmf[k];
  const double tv = tv_distance(occ, Measure(std::move(ref)).normalized_copy());
  const double t = seconds_since(t0);
  o.require(tv < 0.02, "TV " + fmt(tv));
  o.require(t < 30.0, "took " + fmt(t) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("TV ") + fmt(tv);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"triangle (1,1): rb fails, cb fails, rvb holds, cyb holds", triangle},
      {"square (1,1): cb, rvb hold; cyb, rb fail; rate cycle 16 vs 1", square},
      {"0<->A, 2A<->3A: rvb equilibria 1, 2, 3", three_equilibria},
      {"B->A, A+B->2B: (1,l-1) rvb; no equilibrium at l=1", absolute_concentration},
      {"stochastic rvb: product shape, rvb holds, no deterministic rvb", stochastic_rvb},
      {"birth-death: rvb holds, rb fails, cyb holds, box-stable", birth_death},
      {"product-form bridge on complex balanced systems", product_form},
      {"reaction balance bridge on 50 reversible systems", rb_bridge},
      {"six-complex: rvb on x_C=1 only, rb on neither", six_complex},
      {"property suites and corpus analysis under 5 min", suites},
      {"SSA 0<->A against Poisson(1)", ssa_poisson},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double t = seconds_since(t0);
    failed += !o.pass;
    std::printf("%s %2d  %-62s %8.3f s%s%s\n", o.pass ? "PASS" : "FAIL", index, name, t,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
