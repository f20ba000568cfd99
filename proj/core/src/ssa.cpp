#include "crn/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>

#include "crn/error.hpp"
#include "crn/stoch.hpp"

namespace crn {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_config(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg) {
  if (x0.size() != sys.network().num_species()) {
    throw Error(ErrorCode::InvalidArgument, "initial state length does not match species count");
  }
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  }
  const double b = cfg.effective_burn_in();
  if (!(b < cfg.t_end)) throw Error(ErrorCode::InvalidArgument, "burn_in must be below t_end");
}

// Runs the direct method, calling visit(state, t_from, t_to) for every
// holding interval clipped to [0, t_end]. Returns true if absorbed.
template <class Visit>
bool simulate(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg,
              Visit&& visit) {
  const auto& net = sys.network();
  std::vector<IntVector> vectors;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) vectors.push_back(net.reaction_vector(r));

  CounterRng rng(cfg.seed);
  DiscreteState x = x0;
  double t = 0.0;
  std::uint64_t jumps = 0;
  for (;;) {
    auto rates = propensity(sys, x);
    double total = 0.0;
    for (double v : rates) total += v;
    if (total <= 0.0) {
      visit(x, t, cfg.t_end, false);
      return true;
    }
    const double hold = -std::log(rng.uniform_open()) / total;
    if (t + hold >= cfg.t_end) {
      visit(x, t, cfg.t_end, false);
      return false;
    }
    double pick = rng.uniform_open() * total;
    std::size_t r = 0;
    for (; r + 1 < rates.size(); ++r) {
      if (pick < rates[r]) break;
      pick -= rates[r];
    }
    // Guard against rounding landing on a zero-rate tail entry.
    while (rates[r] <= 0.0 && r > 0) --r;
    if (++jumps > cfg.max_jumps) {
      throw Error(ErrorCode::PathExplosionGuard,
                  "more than " + std::to_string(cfg.max_jumps) + " jumps before t_end");
    }
    visit(x, t, t + hold, true);
    t += hold;
    x = x + vectors[r];
  }
}

}  // namespace

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform_open() noexcept {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

SsaPath ssa_path(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg) {
  check_config(sys, x0, cfg);
  SsaPath path;
  path.absorbed = simulate(sys, x0, cfg, [&](const DiscreteState& x, double from, double, bool) {
    path.points.push_back({from, x});
  });
  return path;
}

Measure occupancy_measure(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg) {
  check_config(sys, x0, cfg);
  const double burn = cfg.effective_burn_in();
  std::map<DiscreteState, double> time_in;
  simulate(sys, x0, cfg, [&](const DiscreteState& x, double from, double to, bool) {
    const double lo = std::max(from, burn);
    if (to > lo) time_in[x] += to - lo;
  });
  return Measure(std::move(time_in)).normalized_copy();
}

Measure pooled_occupancy(const MassActionSystem& sys, const DiscreteState& x0, const SsaConfig& cfg,
                         std::size_t replicas) {
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "need at least one replica");
  std::vector<std::future<Measure>> jobs;
  for (std::size_t i = 0; i < replicas; ++i) {
    SsaConfig c = cfg;
    c.seed = cfg.seed + i;
    jobs.push_back(std::async(std::launch::async, [&sys, &x0, c] { return occupancy_measure(sys, x0, c); }));
  }
  std::map<DiscreteState, double> pooled;
  for (auto& j : jobs) {
    const Measure part = j.get();
    for (const auto& [x, w] : part.weights()) pooled[x] += w;
  }
  return Measure(std::move(pooled)).normalized_copy();
}

double tv_distance(const Measure& mu, const Measure& nu) {
  if (!mu.normalized() || !nu.normalized()) {
    throw Error(ErrorCode::NotNormalized, "tv_distance needs normalized measures");
  }
  // Merge walk over the two ordered maps.
  std::vector<double> diffs;
  auto a = mu.weights().begin(), ae = mu.weights().end();
  auto b = nu.weights().begin(), be = nu.weights().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first < b->first)) {
      diffs.push_back(a->second);
      ++a;
    } else if (a == ae || b->first < a->first) {
      diffs.push_back(b->second);
      ++b;
    } else {
      diffs.push_back(std::abs(a->second - b->second));
      ++a;
      ++b;
    }
  }
  std::sort(diffs.begin(), diffs.end());
  double sum = 0.0;
  for (double d : diffs) sum += d;
  return std::min(1.0, 0.5 * sum);
}

}  // namespace crn
