#pragma once

// Exact stochastic simulation (Gillespie direct method) and empirical
// occupancy measures.
//
// Random stream: the k-th 64-bit draw of a path keyed by `seed` is
// splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15), i.e. SplitMix64 evaluated
// at a counter. Uniforms take the top 53 bits. Replica i uses seed + i.

#include <cstdint>
#include <vector>

#include "crn/model.hpp"

namespace crn {

struct SsaConfig {
  std::uint64_t seed = 0;
  double t_end = 1.0;
  /// Negative means the default, 1% of t_end.
  double burn_in = -1.0;
  std::uint64_t max_jumps = 100'000'000;

  double effective_burn_in() const noexcept { return burn_in < 0.0 ? 0.01 * t_end : burn_in; }
};

/// Counter-based generator; see the header comment.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : key_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform in (0, 1).
  double uniform_open() noexcept;
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct PathPoint {
  double t = 0.0;
  DiscreteState state;
};

struct SsaPath {
  std::vector<PathPoint> points;  // jump times; the first point is (0, x0)
  bool absorbed = false;
};

/// Direct-method path on [0, t_end]. Throws PathExplosionGuard past
/// cfg.max_jumps.
SsaPath ssa_path(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg);

/// Normalized time-weighted occupancy over (burn_in, t_end]. The path is
/// not stored, so long runs stay in constant memory apart from the measure.
Measure occupancy_measure(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg);

/// Occupancy pooled over `replicas` independent paths (seeds cfg.seed + i),
/// run concurrently and merged in replica order.
Measure pooled_occupancy(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg,
                         std::size_t replicas);

/// Half the l1 distance. Both measures must be normalized.
double tv_distance(const Measure& mu, const Measure& nu);

}  // namespace crn
