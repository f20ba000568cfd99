#include "crn/stoch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include <Eigen/Dense>

#include "crn/detbal.hpp"
#include "crn/error.hpp"

namespace crn {

namespace {

struct StateHash {
  std::size_t operator()(const DiscreteState& x) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : x.values) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::vector<double> as_doubles(const DiscreteState& x) {
  return {x.values.begin(), x.values.end()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Box

Box::Box(DiscreteState lo, DiscreteState hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw Error(ErrorCode::InvalidArgument, "box bounds differ in length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) throw Error(ErrorCode::InvalidArgument, "box lower bound exceeds upper bound");
  }
}

Box Box::cube(std::size_t n, std::int64_t size) {
  return Box(DiscreteState{IntVector(n, 0)}, DiscreteState{IntVector(n, size)});
}

bool Box::contains(const DiscreteState& x) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

Box bounding_box(std::span<const DiscreteState> states, std::int64_t margin) {
  if (states.empty()) throw Error(ErrorCode::EmptySupport, "bounding box of no states");
  DiscreteState lo = states.front(), hi = states.front();
  for (const auto& x : states) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] -= margin;
    hi[i] += margin;
  }
  return Box(lo, hi);
}

// ---------------------------------------------------------------------------
// Propensities and transitions

std::vector<double> propensity(const MassActionSystem& sys, const DiscreteState& x) {
  const auto& net = sys.network();
  if (x.size() != net.num_species()) {
    throw Error(ErrorCode::InvalidArgument, "state length does not match species count");
  }
  std::vector<double> out(net.num_reactions(), 0.0);
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& y = net.complexes()[net.reactions()[r].source].coeffs;
    double v = sys.kappa(r);
    for (std::size_t i = 0; i < y.size() && v != 0.0; ++i) {
      if (x[i] < y[i] || x[i] < 0) {
        v = 0.0;
        break;
      }
      for (int k = 0; k < y[i]; ++k) v *= static_cast<double>(x[i] - k);
    }
    out[r] = v;
  }
  return out;
}

std::vector<Transition> transitions(const MassActionSystem& sys, const DiscreteState& x) {
  const auto& net = sys.network();
  auto rates = propensity(sys, x);
  std::vector<Transition> out;
  for (std::size_t r = 0; r < rates.size(); ++r) {
    if (rates[r] <= 0.0) continue;
    auto v = net.reaction_vector(r);
    out.push_back({x + v, rates[r], r});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Communicating classes

bool ComponentResult::contains(const DiscreteState& x) const {
  return std::binary_search(states.begin(), states.end(), x);
}

ComponentResult communicating_class(const MassActionSystem& sys, const DiscreteState& seed,
                                    const Box& box, const ExploreOptions& opts) {
  if (seed.size() != sys.network().num_species() || box.dimension() != seed.size()) {
    throw Error(ErrorCode::InvalidArgument, "seed/box dimension does not match species count");
  }
  if (!box.contains(seed)) throw Error(ErrorCode::InvalidArgument, "seed state lies outside the box");

  // Forward exploration inside the box.
  std::unordered_map<DiscreteState, std::size_t, StateHash> index;
  std::vector<DiscreteState> nodes;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<bool> exits_box;
  index.emplace(seed, 0);
  nodes.push_back(seed);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (succ.size() <= u) {
      succ.resize(u + 1);
      exits_box.resize(u + 1, false);
    }
    for (auto& t : transitions(sys, nodes[u])) {
      if (!box.contains(t.target)) {
        exits_box[u] = true;
        continue;
      }
      auto [it, inserted] = index.emplace(t.target, nodes.size());
      if (inserted) {
        if (nodes.size() >= opts.max_states) {
          throw Error(ErrorCode::BoxTooSmall,
                      "component exploration exceeded " + std::to_string(opts.max_states) + " states");
        }
        nodes.push_back(t.target);
        queue.push_back(it->second);
      }
      succ[u].push_back(it->second);
    }
  }
  succ.resize(nodes.size());
  exits_box.resize(nodes.size(), false);

  if (succ[0].empty() && exits_box[0]) {
    throw Error(ErrorCode::BoxTooSmall, "every transition from the seed leaves the box");
  }

  // States that can return to the seed.
  std::vector<std::vector<std::size_t>> pred(nodes.size());
  for (std::size_t u = 0; u < nodes.size(); ++u)
    for (auto v : succ[u]) pred[v].push_back(u);
  std::vector<bool> in_scc(nodes.size(), false);
  in_scc[0] = true;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (auto u : pred[v]) {
      if (!in_scc[u]) {
        in_scc[u] = true;
        stack.push_back(u);
      }
    }
  }

  ComponentResult out;
  out.seed = seed;
  for (std::size_t u = 0; u < nodes.size(); ++u) {
    if (!in_scc[u]) continue;
    out.states.push_back(nodes[u]);
    if (exits_box[u]) out.truncated = true;
    for (auto v : succ[u])
      if (!in_scc[v]) out.leaks = true;
  }
  std::sort(out.states.begin(), out.states.end());
  out.closed = !out.truncated && !out.leaks;
  return out;
}

// ---------------------------------------------------------------------------
// Stationary distributions

namespace {

// Generator restricted to a component, states in sorted order.
struct SparseGenerator {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;  // (target, rate), merged
  std::size_t bandwidth = 0;
};

SparseGenerator build_generator(const MassActionSystem& sys, const ComponentResult& comp) {
  SparseGenerator g;
  g.n = comp.states.size();
  g.rows.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    std::map<std::size_t, double> merged;
    for (auto& t : transitions(sys, comp.states[i])) {
      auto it = std::lower_bound(comp.states.begin(), comp.states.end(), t.target);
      if (it == comp.states.end() || *it != t.target) continue;  // dropped (reflecting)
      auto j = static_cast<std::size_t>(it - comp.states.begin());
      merged[j] += t.rate;
      g.bandwidth = std::max(g.bandwidth, i > j ? i - j : j - i);
    }
    g.rows[i].assign(merged.begin(), merged.end());
  }
  return g;
}

// Grassmann-Taksar-Heyman state reduction on a banded rate matrix. Only
// additions of nonnegative quantities occur, so small probabilities keep
// full relative accuracy.
std::vector<double> solve_gth_banded(const SparseGenerator& g) {
  const std::size_t n = g.n;
  const std::size_t b = g.bandwidth;
  const std::size_t width = 2 * b + 1;
  std::vector<double> band(n * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return band[i * width + (j + b - i)]; };
  for (std::size_t i = 0; i < n; ++i)
    for (auto [j, rate] : g.rows[i]) at(i, j) = rate;

  std::vector<double> exit_down(n, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) {
    const std::size_t lo = k > b ? k - b : 0;
    double s = 0.0;
    for (std::size_t j = lo; j < k; ++j) s += at(k, j);
    if (!(s > 0.0)) throw Error(ErrorCode::SolveFailure, "generator is reducible on the component");
    exit_down[k] = s;
    for (std::size_t i = lo; i < k; ++i) {
      double qik = at(i, k);
      if (qik == 0.0) continue;
      double f = qik / s;
      for (std::size_t j = lo; j < k; ++j) {
        if (j == i) continue;
        at(i, j) += f * at(k, j);
      }
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t lo = k > b ? k - b : 0;
    double acc = 0.0;
    for (std::size_t i = lo; i < k; ++i) acc += pi[i] * at(i, k);
    pi[k] = acc / exit_down[k];
    if (pi[k] > 1e200) {
      for (std::size_t i = 0; i <= k; ++i) pi[i] *= 1e-200;
    }
  }
  return pi;
}

std::vector<double> solve_power(const SparseGenerator& g, std::size_t max_iter) {
  const std::size_t n = g.n;
  std::vector<double> exit(n, 0.0);
  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto [j, r] : g.rows[i]) exit[i] += r;
    lambda = std::max(lambda, exit[i]);
  }
  lambda *= 1.05;
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) next[i] = pi[i] * (1.0 - exit[i] / lambda);
    for (std::size_t i = 0; i < n; ++i)
      for (auto [j, r] : g.rows[i]) next[j] += pi[i] * r / lambda;
    double total = 0.0, diff = 0.0;
    for (double v : next) total += v;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      diff = std::max(diff, std::abs(next[i] - pi[i]) / std::max(next[i], 1e-300));
    }
    pi.swap(next);
    // Residual of pi Q relative to the flux scale.
    if (it % 64 == 0 || diff < 1e-13) {
      std::vector<double> flow(n, 0.0);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        flow[i] -= pi[i] * exit[i];
        scale = std::max(scale, pi[i] * exit[i]);
        for (auto [j, r] : g.rows[i]) flow[j] += pi[i] * r;
      }
      double res = 0.0;
      for (double f : flow) res = std::max(res, std::abs(f));
      if (res <= 1e-12 * std::max(scale, 1e-300)) return pi;
    }
  }
  throw Error(ErrorCode::SolveFailure, "power iteration did not converge");
}

}  // namespace

Measure stationary_distribution(const MassActionSystem& sys, const ComponentResult& component,
                                const StationaryOptions& opts) {
  if (component.states.empty()) throw Error(ErrorCode::EmptySupport, "empty component");
  if (component.leaks) {
    throw Error(ErrorCode::NotClosed, "component is not closed: probability leaks to other states");
  }
  if (component.truncated && !opts.allow_truncated) {
    throw Error(ErrorCode::NotClosed, "component is truncated by the box (pass allow_truncated)");
  }
  if (component.states.size() == 1) return Measure::point_mass(component.states.front());

  auto g = build_generator(sys, component);
  const double work = static_cast<double>(g.n) * static_cast<double>(g.bandwidth) *
                      static_cast<double>(g.bandwidth);
  std::vector<double> pi = work <= opts.direct_work_limit ? solve_gth_banded(g)
                                                          : solve_power(g, opts.max_power_iterations);
  std::map<DiscreteState, double> weights;
  for (std::size_t i = 0; i < g.n; ++i) weights.emplace(component.states[i], pi[i]);
  return Measure(std::move(weights)).normalized_copy();
}

Measure poisson_product(const DetState& c, std::span<const DiscreteState> states) {
  if (states.empty()) throw Error(ErrorCode::EmptySupport, "poisson_product over no states");
  for (double v : c.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
  }
  std::vector<double> logw;
  logw.reserve(states.size());
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& x : states) {
    if (x.size() != c.size() || !x.nonnegative()) {
      throw Error(ErrorCode::InvalidArgument, "poisson_product needs nonnegative states of matching size");
    }
    double lw = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      lw += static_cast<double>(x[i]) * std::log(c[i]) - std::lgamma(static_cast<double>(x[i]) + 1.0);
    }
    logw.push_back(lw);
    top = std::max(top, lw);
  }
  std::map<DiscreteState, double> weights;
  for (std::size_t k = 0; k < states.size(); ++k) {
    double w = std::exp(logw[k] - top);
    if (w > 0.0) weights[states[k]] += w;
  }
  return Measure(std::move(weights)).normalized_copy();
}

// ---------------------------------------------------------------------------
// Measure classification

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Decides which referenced values are reliable and evaluates the terms of
// each balance equation.
class MeasureChecker {
 public:
  MeasureChecker(const MassActionSystem& sys, const Measure& mu, const Box* domain, double tol)
      : sys_(sys), net_(sys.network()), mu_(mu), domain_(domain), tol_(tol) {
    const std::size_t n = net_.num_species();
    scale_ = mu.max_weight();
    if (scale_ <= 0.0) scale_ = 1.0;
    for (std::size_t r = 0; r < net_.num_reactions(); ++r) vectors_.push_back(net_.reaction_vector(r));
    if (domain_) {
      if (domain_->dimension() != n) throw Error(ErrorCode::InvalidArgument, "domain dimension mismatch");
      for (const auto& [x, w] : mu.weights()) {
        if (!domain_->contains(x)) {
          throw Error(ErrorCode::InvalidArgument, "measure is not supported inside the domain");
        }
      }
      margin_ = net_.max_complex_coeff();
      up_crossed_.assign(n, false);
      low_crossed_.assign(n, false);
      for (const auto& v : vectors_) {
        for (std::size_t i = 0; i < n; ++i) {
          if (v[i] > 0) up_crossed_[i] = true;
          if (v[i] < 0 && domain_->lower[i] > 0) low_crossed_[i] = true;
        }
      }
    }
  }

  // Normalized weight, or nullopt if unreliable.
  std::optional<double> weight(const DiscreteState& x) const {
    if (!domain_) return mu_(x) / scale_;
    bool outside = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto lo = domain_->lower[i], hi = domain_->upper[i];
      if (x[i] > hi) return std::nullopt;
      if (x[i] < lo) {
        if (lo > 0) return std::nullopt;
        outside = true;  // strictly negative coordinate: no mass there
        continue;
      }
      if (up_crossed_[i] && x[i] > hi - margin_) return std::nullopt;
      if (low_crossed_[i] && x[i] < lo + margin_) return std::nullopt;
    }
    if (outside) return 0.0;
    return mu_(x) / scale_;
  }

  const std::vector<double>& rates(const DiscreteState& x) const {
    auto it = rate_cache_.find(x);
    if (it != rate_cache_.end()) return it->second;
    return rate_cache_.emplace(x, propensity(sys_, x)).first->second;
  }

  // pi(x) * sum of rates over `reactions`; nullopt if pi(x) is needed but unreliable.
  std::optional<double> flux(const DiscreteState& x, std::span<const std::size_t> reactions) const {
    const auto& lam = rates(x);
    double total = 0.0;
    for (auto r : reactions) total += lam[r];
    if (total == 0.0) return 0.0;
    auto w = weight(x);
    if (!w) return std::nullopt;
    return *w * total;
  }

  std::optional<double> flux(const DiscreteState& x, std::size_t reaction) const {
    return flux(x, std::span<const std::size_t>(&reaction, 1));
  }

  Witness witness(const DiscreteState& x, std::string condition, double lhs, double rhs) const {
    return {as_doubles(x), std::move(condition), lhs * scale_, rhs * scale_};
  }

  bool close(double lhs, double rhs) const { return balance_close(lhs, rhs, tol_); }
  double tol() const { return tol_; }
  double scale() const { return scale_; }
  const std::vector<IntVector>& vectors() const { return vectors_; }

 private:
  const MassActionSystem& sys_;
  const ReactionNetwork& net_;
  const Measure& mu_;
  const Box* domain_;
  double tol_;
  double scale_ = 1.0;
  std::int64_t margin_ = 0;
  std::vector<bool> up_crossed_, low_crossed_;
  std::vector<IntVector> vectors_;
  mutable std::map<DiscreteState, std::vector<double>> rate_cache_;
};

// Tallies one condition: first failure wins, skipped equations counted.
struct Tally {
  std::optional<Witness> failure;
  std::size_t checked = 0;
  std::size_t skipped = 0;

  Verdict verdict() const {
    if (failure) return Verdict::fails(*failure);
    if (checked == 0 && skipped > 0) return Verdict::undetermined();
    return Verdict::holds();
  }
};

IntVector complex_diff(const ReactionNetwork& net, std::size_t from, std::size_t to) {
  IntVector d(net.num_species());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = std::int64_t{net.complexes()[to].coeffs[i]} - net.complexes()[from].coeffs[i];
  return d;
}

IntVector complex_vec(const Complex& y) { return {y.coeffs.begin(), y.coeffs.end()}; }

std::string pair_label(const ReactionNetwork& net, std::size_t a, std::size_t b) {
  return "pair:" + net.complex_string(a) + " | " + net.complex_string(b);
}

std::string xi_label(const IntVector& xi) {
  std::string out = "xi:(";
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xi[i]);
  }
  return out + ")";
}

// Candidate states x for an equation linking x and x + d: x in supp or x + d in supp.
std::set<DiscreteState> candidates(const std::vector<DiscreteState>& support, const IntVector& d) {
  std::set<DiscreteState> out(support.begin(), support.end());
  for (const auto& s : support) out.insert(s - d);
  return out;
}

Verdict check_stationary(const MeasureChecker& chk, const MassActionSystem& sys,
                         const std::vector<DiscreteState>& support, Tally& tally) {
  const auto& net = sys.network();
  std::vector<std::size_t> all(net.num_reactions());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
  std::set<DiscreteState> xs(support.begin(), support.end());
  for (const auto& s : support)
    for (const auto& v : chk.vectors()) xs.insert(s + v);
  for (const auto& x : xs) {
    auto lhs = chk.flux(x, all);
    double rhs = 0.0;
    bool reliable = true;
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
      auto term = chk.flux(x - chk.vectors()[r], r);
      if (!term) {
        reliable = false;
        break;
      }
      rhs += *term;
    }
    if (!lhs || !reliable) {
      ++tally.skipped;
      continue;
    }
    ++tally.checked;
    if (!chk.close(*lhs, rhs)) {
      tally.failure = chk.witness(x, "global", *lhs, rhs);
      break;
    }
  }
  return tally.verdict();
}

MeasureBalanceReport classify_impl(const MassActionSystem& sys, const Measure& mu, const Box* domain,
                                   double tol, const CycleOptions& cycle_opts) {
  const auto& net = sys.network();
  MeasureChecker chk(sys, mu, domain, tol);
  const auto support = mu.support();
  MeasureBalanceReport rep;

  // (a) every unordered pair {s, t} joined by a reaction, oriented s < t
  Tally rb;
  for (std::size_t r = 0; r < net.num_reactions() && !rb.failure; ++r) {
    const auto& rx = net.reactions()[r];
    auto back = net.find_reaction(rx.target, rx.source);
    if (back && rx.source > rx.target) continue;
    const std::size_t s = std::min(rx.source, rx.target);
    const std::size_t t = std::max(rx.source, rx.target);
    auto fwd = net.find_reaction(s, t);
    auto bwd = net.find_reaction(t, s);
    const IntVector d = complex_diff(net, s, t);
    for (const auto& x : candidates(support, d)) {
      const DiscreteState xd = x + d;
      std::optional<double> lhs = fwd ? chk.flux(x, *fwd) : std::optional<double>(0.0);
      std::optional<double> rhs = bwd ? chk.flux(xd, *bwd) : std::optional<double>(0.0);
      if (!lhs || !rhs) {
        ++rb.skipped;
        continue;
      }
      ++rb.checked;
      if (!chk.close(*lhs, *rhs)) {
        rb.failure = chk.witness(x, pair_label(net, s, t), *lhs, *rhs);
        break;
      }
    }
  }
  rep.rb = rb.verdict();

  // (b) every complex y
  Tally cb;
  for (std::size_t y = 0; y < net.num_complexes() && !cb.failure; ++y) {
    std::vector<std::size_t> out_rx, in_rx;
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
      if (net.reactions()[r].source == y) out_rx.push_back(r);
      if (net.reactions()[r].target == y) in_rx.push_back(r);
    }
    std::set<DiscreteState> xs(support.begin(), support.end());
    for (auto r : in_rx) {
      auto d = complex_diff(net, y, net.reactions()[r].source);
      for (const auto& s : support) xs.insert(s - d);
    }
    for (const auto& x : xs) {
      auto lhs = chk.flux(x, out_rx);
      double rhs = 0.0;
      bool reliable = true;
      for (auto r : in_rx) {
        auto d = complex_diff(net, y, net.reactions()[r].source);
        auto term = chk.flux(x + d, r);
        if (!term) {
          reliable = false;
          break;
        }
        rhs += *term;
      }
      if (!lhs || !reliable) {
        ++cb.skipped;
        continue;
      }
      ++cb.checked;
      if (!chk.close(*lhs, rhs)) {
        cb.failure = chk.witness(x, "complex:" + net.complex_string(y), *lhs, rhs);
        break;
      }
    }
  }
  rep.cb = cb.verdict();

  // (c) every reaction-vector class
  Tally rvb;
  for (const auto& cls : reaction_vector_classes(net)) {
    if (rvb.failure) break;
    for (const auto& x : candidates(support, cls.xi)) {
      auto lhs = chk.flux(x, cls.forward);
      auto rhs = chk.flux(x + cls.xi, cls.backward);
      if (!lhs || !rhs) {
        ++rvb.skipped;
        continue;
      }
      ++rvb.checked;
      if (!chk.close(*lhs, *rhs)) {
        rvb.failure = chk.witness(x, xi_label(cls.xi), *lhs, *rhs);
        break;
      }
    }
  }
  rep.rvb = rvb.verdict();

  // (d) every directed cycle; only x with all x + y_i in the support matter
  Tally cyb;
  for (const auto& cyc : simple_cycles(net, cycle_opts)) {
    if (cyb.failure) break;
    const std::size_t j = cyc.complexes.size();
    const IntVector y1 = complex_vec(net.complexes()[cyc.complexes[0]]);
    for (const auto& s : support) {
      const DiscreteState x = s - y1;
      std::vector<DiscreteState> at(j);
      bool all_supported = true;
      for (std::size_t i = 0; i < j; ++i) {
        at[i] = x + complex_vec(net.complexes()[cyc.complexes[i]]);
        if (mu(at[i]) <= 0.0) {
          all_supported = false;
          break;
        }
      }
      if (!all_supported) continue;
      double log_fwd = 0.0, log_bwd = 0.0;
      bool reliable = true;
      for (std::size_t i = 0; i < j && reliable; ++i) {
        const std::size_t a = cyc.complexes[i], b = cyc.complexes[(i + 1) % j];
        auto f = net.find_reaction(a, b);
        auto g = net.find_reaction(b, a);
        auto tf = chk.flux(at[i], *f);
        auto tg = g ? chk.flux(at[(i + 1) % j], *g) : std::optional<double>(0.0);
        if (!tf || !tg) {
          reliable = false;
          break;
        }
        log_fwd = (log_fwd == kNegInf || *tf == 0.0) ? kNegInf : log_fwd + std::log(*tf);
        log_bwd = (log_bwd == kNegInf || *tg == 0.0) ? kNegInf : log_bwd + std::log(*tg);
      }
      if (!reliable) {
        ++cyb.skipped;
        continue;
      }
      ++cyb.checked;
      bool ok = true;
      if (!(log_fwd == kNegInf && log_bwd == kNegInf)) {
        const double hi = std::max(log_fwd, log_bwd), lo = std::min(log_fwd, log_bwd);
        ok = -std::expm1(lo - hi) <= chk.tol();
      }
      if (!ok) {
        std::string label = "cycle:";
        for (std::size_t i = 0; i < j; ++i) {
          if (i) label += " > ";
          label += net.complex_string(cyc.complexes[i]);
        }
        auto ex = [](double v) { return v == kNegInf ? 0.0 : std::exp(v); };
        // Products are reported in normalized units.
        cyb.failure = Witness{as_doubles(x), label, ex(log_fwd), ex(log_bwd)};
        break;
      }
    }
  }
  rep.cyb = cyb.verdict();

  Tally st;
  rep.stationary = check_stationary(chk, sys, support, st);
  rep.boundary_skipped = rb.skipped + cb.skipped + rvb.skipped + cyb.skipped + st.skipped;
  return rep;
}

}  // namespace

MeasureBalanceReport classify_measure(const MassActionSystem& sys, const Measure& mu, const Box& domain,
                                      double tol, const CycleOptions& cycles) {
  return classify_impl(sys, mu, &domain, tol, cycles);
}

MeasureBalanceReport classify_exact_measure(const MassActionSystem& sys, const Measure& mu, double tol,
                                            const CycleOptions& cycles) {
  return classify_impl(sys, mu, nullptr, tol, cycles);
}

Verdict is_stationary_measure(const MassActionSystem& sys, const Measure& mu, const Box& domain,
                              double tol) {
  MeasureChecker chk(sys, mu, &domain, tol);
  Tally t;
  return check_stationary(chk, sys, mu.support(), t);
}

Verdict is_stationary_exact(const MassActionSystem& sys, const Measure& mu, double tol) {
  MeasureChecker chk(sys, mu, nullptr, tol);
  Tally t;
  return check_stationary(chk, sys, mu.support(), t);
}

// ---------------------------------------------------------------------------
// Support hypothesis for the CB + RVB => RB argument

bool support_is_unisolvent(std::span<const DiscreteState> points, int degree) {
  if (points.empty()) return false;
  const std::size_t n = points.front().size();
  // Exponent vectors of total degree <= degree.
  std::vector<std::vector<int>> monomials;
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == n) {
      monomials.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(rec, 0, degree);
  if (points.size() < monomials.size()) return false;

  Eigen::MatrixXd v(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t m = 0; m < monomials.size(); ++m) {
      double val = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < monomials[m][i]; ++k) val *= static_cast<double>(points[p][i]);
      v(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = val;
    }
  }
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    double norm = v.col(c).norm();
    if (norm > 0) v.col(c) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank()) == monomials.size();
}

}  // namespace crn
