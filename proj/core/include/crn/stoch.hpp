#pragma once

// Stochastic mass-action kinetics on Z^n: propensities, finite-box
// exploration of communicating classes, stationary distributions and the
// classification of measures against the balance conditions.

#include <cstddef>
#include <span>
#include <vector>

#include "crn/graph.hpp"
#include "crn/model.hpp"

namespace crn {

/// Axis-aligned integer box [lower, upper].
struct Box {
  DiscreteState lower;
  DiscreteState upper;

  Box() = default;
  Box(DiscreteState lo, DiscreteState hi);

  /// [0, size]^n
  static Box cube(std::size_t n, std::int64_t size);

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(const DiscreteState& x) const noexcept;
};

/// kappa * x!/(x-y)! * 1{x >= y} for every reaction.
std::vector<double> propensity(const MassActionSystem& sys, const DiscreteState& x);

struct Transition {
  DiscreteState target;
  double rate = 0.0;
  std::size_t reaction = 0;
};

/// One entry per reaction with positive propensity at x (not merged).
std::vector<Transition> transitions(const MassActionSystem& sys, const DiscreteState& x);

struct ComponentResult {
  DiscreteState seed;
  std::vector<DiscreteState> states;  // sorted
  bool closed = false;     // no transition leaves the set
  bool truncated = false;  // some transition exits the box
  bool leaks = false;      // some transition reaches an in-box state outside the set

  bool contains(const DiscreteState& x) const;
};

struct ExploreOptions {
  std::size_t max_states = 2'000'000;
};

/// Strongly connected component of `seed` in the transition graph restricted
/// to `box`. Throws BoxTooSmall when every transition out of the seed exits
/// the box.
ComponentResult communicating_class(const MassActionSystem& sys, const DiscreteState& seed,
                                    const Box& box, const ExploreOptions& opts = {});

struct StationaryOptions {
  bool allow_truncated = false;
  /// Above this n * bandwidth^2 the solver switches to power iteration.
  double direct_work_limit = 2e10;
  std::size_t max_power_iterations = 2'000'000;
};

/// Normalized stationary distribution on a closed component. Truncated
/// components (exits dropped, i.e. reflecting) need `allow_truncated`.
/// Uses the GTH state-reduction elimination on the banded generator.
Measure stationary_distribution(const MassActionSystem& sys, const ComponentResult& component,
                                const StationaryOptions& opts = {});

/// c^x / x! normalized over `states`.
Measure poisson_product(const DetState& c, std::span<const DiscreteState> states);

struct MeasureBalanceReport {
  Verdict rb;
  Verdict cb;
  Verdict rvb;
  Verdict cyb;
  Verdict stationary;
  std::size_t boundary_skipped = 0;
};

/// Checks every balance equation whose referenced values are reliable: the
/// referenced states must sit at least `max coefficient` away from any box
/// face that some transition crosses. Values below a lower face at or under
/// zero are exactly 0. Skipped equations never produce Fails.
MeasureBalanceReport classify_measure(const MassActionSystem& sys, const Measure& mu,
                                      const Box& domain, double tol = 1e-9,
                                      const CycleOptions& cycles = {});

/// Same equations for a measure known exactly on all of Z^n (zero off its
/// support), e.g. the stationary distribution of a closed component.
MeasureBalanceReport classify_exact_measure(const MassActionSystem& sys, const Measure& mu,
                                            double tol = 1e-9, const CycleOptions& cycles = {});

Verdict is_stationary_measure(const MassActionSystem& sys, const Measure& mu, const Box& domain,
                              double tol = 1e-9);
Verdict is_stationary_exact(const MassActionSystem& sys, const Measure& mu, double tol = 1e-9);

/// True iff no nonzero polynomial of total degree <= `degree` vanishes on
/// `points` (the monomial evaluation matrix has full column rank).
bool support_is_unisolvent(std::span<const DiscreteState> points, int degree);

/// Smallest box containing `states`, grown by `margin` on every side.
Box bounding_box(std::span<const DiscreteState> states, std::int64_t margin);

}  // namespace crn
