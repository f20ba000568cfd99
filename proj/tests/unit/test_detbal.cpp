#include <doctest.h>

#include <cmath>

#include "crn/detbal.hpp"
#include "crn/error.hpp"
#include "systems.hpp"

using namespace crn;
using namespace crn::testing;

namespace {

DetState at(std::initializer_list<double> v) { return DetState{std::vector<double>(v)}; }

double rate_of(const MassActionSystem& sys, const DetState& c, std::string_view src, std::string_view dst) {
  const auto& net = sys.network();
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    if (net.complex_string(rx.source) == src && net.complex_string(rx.target) == dst) return det_rates(sys, c)[r];
  }
  FAIL("no such reaction");
  return 0.0;
}

}  // namespace

TEST_CASE("deterministic rates") {
  auto tri = system_of(kTriangle);
  auto r = det_rates(tri, at({1, 1}));
  CHECK(r == tri.kappa());

  auto three = system_of(kThreeRvb);
  const auto c = at({2});
  CHECK(rate_of(three, c, "0", "A") == 6.0);
  CHECK(rate_of(three, c, "A", "0") == 22.0);
  CHECK(rate_of(three, c, "2A", "3A") == 24.0);
  CHECK(rate_of(three, c, "3A", "2A") == 8.0);

  for (double v : det_rates(tri, at({-1, 2}))) CHECK(v == 0.0);
}

TEST_CASE("drift and equilibria") {
  auto three = system_of(kThreeRvb);
  for (double c : {1.0, 2.0, 3.0}) {
    CHECK(drift(three, at({c}))[0] == doctest::Approx(0.0));
    CHECK(is_equilibrium(three, at({c})).is_holds());
  }
  CHECK(is_equilibrium(three, at({1.5})).is_fails());

  auto acr = system_of(kAcr);
  auto d = drift(acr, at({1, 4}));
  CHECK(d[0] == 0.0);
  CHECK(d[1] == 0.0);
}

TEST_CASE("classify: triangle at (1,1)") {
  auto rep = classify_state(system_of(kTriangle), at({1, 1}));
  CHECK(rep.rb.status == Status::Fails);
  CHECK(rep.cb.status == Status::Fails);
  CHECK(rep.rvb.status == Status::Holds);
  CHECK(rep.cyb.status == Status::Holds);
  REQUIRE(rep.cb.witness);
  // 2A and 2B both see in-flux 3 against out-flux 2
  const auto& w = *rep.cb.witness;
  CHECK(std::min(w.lhs, w.rhs) == doctest::Approx(2.0));
  CHECK(std::max(w.lhs, w.rhs) == doctest::Approx(3.0));
  CHECK(rep.is_equilibrium.is_holds());
}

TEST_CASE("classify: square at (1,1)") {
  auto sq = system_of(kSquare);
  auto rep = classify_state(sq, at({1, 1}));
  CHECK(rep.cb.status == Status::Holds);
  CHECK(rep.rvb.status == Status::Holds);
  CHECK(rep.cyb.status == Status::Fails);
  CHECK(rep.rb.status == Status::Fails);
  REQUIRE(rep.cyb.witness);
  CHECK(std::max(rep.cyb.witness->lhs, rep.cyb.witness->rhs) == doctest::Approx(16.0));
  CHECK(std::min(rep.cyb.witness->lhs, rep.cyb.witness->rhs) == doctest::Approx(1.0));
  CHECK_FALSE(system_cycle_balanced(sq));
}

TEST_CASE("classify: negative coordinate makes every equation trivial") {
  auto rep = classify_state(system_of(kSquare), at({-1, 3}));
  CHECK(rep.rb.is_holds());
  CHECK(rep.cb.is_holds());
  CHECK(rep.rvb.is_holds());
  CHECK(rep.cyb.is_holds());
}

TEST_CASE("witness present iff fails") {
  for (auto text : {kTriangle, kSquare, kIntro, kThreeRvb}) {
    auto sys = system_of(text);
    DetState c;
    c.values.assign(sys.network().num_species(), 1.3);
    auto rep = classify_state(sys, c);
    for (const Verdict* v : {&rep.rb, &rep.cb, &rep.rvb, &rep.cyb, &rep.is_equilibrium}) {
      CHECK(v->witness.has_value() == v->is_fails());
    }
  }
}

TEST_CASE("reaction vector classes") {
  auto net = system_of(kStochRvb).network();
  auto classes = reaction_vector_classes(net);
  std::vector<int> seen(net.num_reactions(), 0);
  for (const auto& cls : classes) {
    CHECK(cls.xi[0] > 0);
    for (auto r : cls.forward) {
      ++seen[r];
      CHECK(net.reaction_vector(r) == cls.xi);
    }
    for (auto r : cls.backward) {
      ++seen[r];
      CHECK(net.reaction_vector(r)[0] == -cls.xi[0]);
    }
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(classes.size() == 2);  // xi = 1 and 2
}

TEST_CASE("system cycle balance") {
  CHECK(system_cycle_balanced(system_of(kTriangle)));
  CHECK_FALSE(system_cycle_balanced(system_of(kSquare)));
  CHECK(system_cycle_balanced(system_of(kThreeRvb)));
  CHECK(system_cycle_balanced(system_of("0 <-> A : 3, 7\n2A <-> 3A : 0.1, 9\n")));
}

TEST_CASE("reaction balanced solver") {
  auto intro = system_of(kIntroWegscheider);
  auto c = solve_reaction_balanced(intro);
  REQUIRE(c);
  CHECK((*c)[0] == doctest::Approx((*c)[1]));
  CHECK((*c)[0] * (*c)[1] == doctest::Approx((*c)[2] * (*c)[2]));
  CHECK(classify_state(intro, *c).rb.is_holds());

  CHECK_FALSE(solve_reaction_balanced(system_of(kSquare)));

  auto ring = system_of("A <-> B : 1, 1\nB <-> C : 1, 1\nC <-> A : 1, 1\n");
  auto r = solve_reaction_balanced(ring);
  REQUIRE(r);
  CHECK((*r)[0] == doctest::Approx((*r)[1]));
  CHECK((*r)[1] == doctest::Approx((*r)[2]));

  CHECK_THROWS_AS(solve_reaction_balanced(system_of(kAcr)), Error);
}

TEST_CASE("complex balanced solver") {
  auto sq = system_of(kSquare);
  auto c = solve_complex_balanced(sq);
  REQUIRE(c);
  CHECK((*c)[0] == doctest::Approx((*c)[1]));
  CHECK(classify_state(sq, *c).cb.is_holds());

  CHECK_FALSE(solve_complex_balanced(system_of(kTriangle)));
  CHECK_THROWS_AS(solve_complex_balanced(system_of(kAcr)), Error);

  auto intro = system_of(kIntro);
  auto ci = solve_complex_balanced(intro);
  REQUIRE(ci);
  CHECK(classify_state(intro, *ci).cb.is_holds());
}

TEST_CASE("rvb solver") {
  auto three = solve_rvb(system_of(kThreeRvb));
  REQUIRE(three.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(three[i][0] - double(i + 1)) < 1e-8);

  auto acr = solve_rvb(system_of(kAcr));
  REQUIRE_FALSE(acr.empty());
  for (const auto& c : acr) CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(solve_rvb(system_of(kStochRvb)).empty());
}

TEST_CASE("the stochastic-rvb network has no deterministic rvb state") {
  // xi = +1 is 0->A (1) and A->2A (a); xi = -1 is A->0 (a) and 2A->A (2a^2).
  // So that class balances only at a = 1/sqrt(2), where xi = 2 does not.
  auto sys = system_of(kStochRvb);
  const double a = 1.0 / std::sqrt(2.0);
  auto rep = classify_state(sys, at({a}));
  CHECK(rep.rvb.is_fails());
  auto res = rvb_residuals(sys, reaction_vector_classes(sys.network()), at({a}));
  CHECK(std::abs(res[0]) < 1e-12);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  CHECK(worst > 1e-3);
}

TEST_CASE("integrate") {
  auto three = system_of(kThreeRvb);
  auto path = integrate(three, at({0.5}), 50.0);
  CHECK(std::abs(path.back().state[0] - 1.0) < 1e-6);
  CHECK(path.back().t == doctest::Approx(50.0));

  auto sq = system_of(kSquare);
  auto p2 = integrate(sq, at({3, 1}), 50.0, 1e-3, 1000);
  CHECK(std::abs(p2.back().state[0] - 2.0) < 1e-6);
  CHECK(std::abs(p2.back().state[1] - 2.0) < 1e-6);
  for (const auto& pt : p2) CHECK(std::abs(pt.state[0] + pt.state[1] - 4.0) < 1e-8 * (1.0 + pt.t));

  auto p0 = integrate(sq, at({3, 1}), 0.0);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0].t == 0.0);
  CHECK(p0[0].state == at({3, 1}));

  CHECK_THROWS_AS(integrate(system_of("2A -> 3A : 1\n"), at({2}), 10.0, 1e-2), Error);
}

TEST_CASE("compatibility classes") {
  auto three = system_of(kThreeRvb).network();
  CHECK(same_compatibility_class(three, at({1}), at({3})));
  auto acr = system_of(kAcr).network();
  CHECK_FALSE(same_compatibility_class(acr, at({1, 1}), at({1, 3})));
  CHECK(same_compatibility_class(acr, at({1, 3}), at({2, 2})));
  CHECK(same_compatibility_class(acr, at({1, 3}), at({1, 3})));
}
