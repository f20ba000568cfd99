#include "crn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

#include <boost/multiprecision/cpp_int.hpp>

#include "crn/error.hpp"

namespace crn {

// ---------------------------------------------------------------------------
// SpeciesTable

bool SpeciesTable::valid_identifier(std::string_view name) noexcept {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) { return alpha(c) || digit(c); });
}

SpeciesTable::SpeciesTable(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!valid_identifier(n)) {
      throw Error(ErrorCode::InvalidArgument, "invalid species name '" + n + "'");
    }
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate species name '" + n + "'");
    }
  }
}

std::optional<std::size_t> SpeciesTable::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

// ---------------------------------------------------------------------------
// Complex

bool Complex::is_zero() const noexcept {
  return std::all_of(coeffs.begin(), coeffs.end(), [](int v) { return v == 0; });
}

int Complex::max_coeff() const noexcept {
  return coeffs.empty() ? 0 : *std::max_element(coeffs.begin(), coeffs.end());
}

int Complex::molecularity() const noexcept {
  return std::accumulate(coeffs.begin(), coeffs.end(), 0);
}

// ---------------------------------------------------------------------------
// ReactionNetwork

ReactionNetwork build_network(SpeciesTable species, std::vector<Complex> complexes,
                              std::vector<Reaction> reactions) {
  const std::size_t n = species.size();
  if (complexes.empty() && reactions.empty() && species.empty()) return ReactionNetwork{};
  if (reactions.empty()) {
    throw Error(ErrorCode::EmptyNetwork,
                "a network with species or complexes must have at least one reaction");
  }
  for (const auto& y : complexes) {
    if (y.coeffs.size() != n) {
      throw Error(ErrorCode::InvalidArgument, "complex length does not match species count");
    }
    for (int v : y.coeffs) {
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "negative stoichiometric coefficient");
    }
  }

  std::vector<Complex> canonical = complexes;
  std::sort(canonical.begin(), canonical.end());
  canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());
  auto canon_index = [&](std::size_t input) {
    auto it = std::lower_bound(canonical.begin(), canonical.end(), complexes.at(input));
    return static_cast<std::size_t>(it - canonical.begin());
  };

  std::vector<Reaction> canon_reactions;
  canon_reactions.reserve(reactions.size());
  for (const auto& r : reactions) {
    if (r.source >= complexes.size() || r.target >= complexes.size()) {
      throw Error(ErrorCode::InvalidArgument, "reaction references an unknown complex");
    }
    Reaction c{canon_index(r.source), canon_index(r.target)};
    if (c.source == c.target) {
      throw Error(ErrorCode::SelfLoop, "reaction from a complex to itself");
    }
    canon_reactions.push_back(c);
  }
  std::sort(canon_reactions.begin(), canon_reactions.end());
  if (auto dup = std::adjacent_find(canon_reactions.begin(), canon_reactions.end());
      dup != canon_reactions.end()) {
    throw Error(ErrorCode::DuplicateReaction, "reaction listed more than once");
  }

  std::vector<bool> used(canonical.size(), false);
  for (const auto& r : canon_reactions) used[r.source] = used[r.target] = true;
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    if (!used[i]) throw Error(ErrorCode::OrphanComplex, "complex appears in no reaction");
  }
  for (std::size_t s = 0; s < n; ++s) {
    bool present = std::any_of(canonical.begin(), canonical.end(),
                               [&](const Complex& y) { return y.coeffs[s] != 0; });
    if (!present) {
      throw Error(ErrorCode::UnusedSpecies, "species '" + species.name(s) + "' appears in no complex");
    }
  }

  ReactionNetwork net;
  net.species_ = std::move(species);
  net.complexes_ = std::move(canonical);
  net.reactions_ = std::move(canon_reactions);
  return net;
}

std::optional<std::size_t> ReactionNetwork::find_complex(const Complex& y) const {
  auto it = std::lower_bound(complexes_.begin(), complexes_.end(), y);
  if (it == complexes_.end() || *it != y) return std::nullopt;
  return static_cast<std::size_t>(it - complexes_.begin());
}

std::optional<std::size_t> ReactionNetwork::find_reaction(std::size_t source,
                                                          std::size_t target) const {
  Reaction key{source, target};
  auto it = std::lower_bound(reactions_.begin(), reactions_.end(), key);
  if (it == reactions_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - reactions_.begin());
}

IntVector ReactionNetwork::reaction_vector(std::size_t r) const {
  const auto& rx = reactions_.at(r);
  const auto& y = complexes_[rx.source].coeffs;
  const auto& yp = complexes_[rx.target].coeffs;
  IntVector v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v[i] = std::int64_t{yp[i]} - y[i];
  return v;
}

int ReactionNetwork::max_complex_coeff() const noexcept {
  int m = 0;
  for (const auto& y : complexes_) m = std::max(m, y.max_coeff());
  return m;
}

int ReactionNetwork::max_molecularity() const noexcept {
  int m = 0;
  for (const auto& y : complexes_) m = std::max(m, y.molecularity());
  return m;
}

std::string ReactionNetwork::complex_string(std::size_t i) const {
  const auto& y = complexes_.at(i);
  std::string out;
  for (std::size_t s = 0; s < y.coeffs.size(); ++s) {
    if (y.coeffs[s] == 0) continue;
    if (!out.empty()) out += " + ";
    if (y.coeffs[s] != 1) out += std::to_string(y.coeffs[s]);
    out += species_.name(s);
  }
  return out.empty() ? "0" : out;
}

std::string ReactionNetwork::reaction_string(std::size_t r) const {
  const auto& rx = reactions_.at(r);
  return complex_string(rx.source) + " -> " + complex_string(rx.target);
}

IntVector reaction_vector(const ReactionNetwork& net, const Reaction& r) {
  auto idx = net.find_reaction(r.source, r.target);
  if (!idx) throw Error(ErrorCode::UnknownReaction, "reaction is not part of the network");
  return net.reaction_vector(*idx);
}

// ---------------------------------------------------------------------------
// Stoichiometric subspace (exact)

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<cpp_rational>>;

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    cpp_rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      cpp_rational f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

IntVector primitive_integer(const std::vector<cpp_rational>& v) {
  cpp_int lcm = 1;
  for (const auto& q : v) {
    cpp_int d = boost::multiprecision::denominator(q);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  std::vector<cpp_int> ints;
  ints.reserve(v.size());
  cpp_int g = 0;
  for (const auto& q : v) {
    cpp_int z = boost::multiprecision::numerator(q) * (lcm / boost::multiprecision::denominator(q));
    ints.push_back(z);
    g = boost::multiprecision::gcd(g, z);
  }
  if (g == 0) g = 1;
  int sign = 1;
  for (const auto& z : ints) {
    if (z != 0) {
      sign = z < 0 ? -1 : 1;
      break;
    }
  }
  IntVector out;
  out.reserve(ints.size());
  for (const auto& z : ints) {
    cpp_int s = z / g * sign;
    if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min()) {
      throw Error(ErrorCode::InvariantViolation, "conserved vector does not fit in 64 bits");
    }
    out.push_back(static_cast<std::int64_t>(s));
  }
  return out;
}

}  // namespace

StoichiometricBasis stoichiometric_basis(const ReactionNetwork& net) {
  StoichiometricBasis out;
  const std::size_t n = net.num_species();
  const std::size_t r = net.num_reactions();
  if (n == 0) return out;

  // Columns are reaction vectors; pivots pick an independent subset.
  RationalMatrix cols(n, std::vector<cpp_rational>(r));
  std::vector<IntVector> vectors;
  vectors.reserve(r);
  for (std::size_t j = 0; j < r; ++j) {
    vectors.push_back(net.reaction_vector(j));
    for (std::size_t i = 0; i < n; ++i) cols[i][j] = vectors.back()[i];
  }
  for (std::size_t p : rref(cols, r)) out.basis.push_back(vectors[p]);

  // Left null space: solve w^T G = 0, i.e. null space of G^T (r x n).
  RationalMatrix gt(r, std::vector<cpp_rational>(n));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) gt[j][i] = vectors[j][i];
  auto pivots = rref(gt, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<cpp_rational> w(n, 0);
    w[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) w[pivots[k]] = -gt[k][free];
    out.conserved.push_back(primitive_integer(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// MassActionSystem

MassActionSystem::MassActionSystem(ReactionNetwork network, std::vector<double> kappa)
    : network_(std::move(network)), kappa_(std::move(kappa)) {
  if (kappa_.size() != network_.num_reactions()) {
    throw Error(ErrorCode::InvalidArgument, "one rate constant per reaction is required");
  }
  for (double k : kappa_) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw Error(ErrorCode::NonpositiveRate, "rate constants must be positive and finite");
    }
  }
}

MassActionSystem MassActionSystem::from_reactions(SpeciesTable species,
                                                  const std::vector<ReactionSpec>& reactions) {
  std::vector<Complex> complexes;
  std::vector<Reaction> rx;
  complexes.reserve(2 * reactions.size());
  for (const auto& spec : reactions) {
    rx.push_back({complexes.size(), complexes.size() + 1});
    complexes.push_back(spec.source);
    complexes.push_back(spec.target);
  }
  ReactionNetwork net = build_network(std::move(species), complexes, rx);
  std::vector<double> kappa(net.num_reactions(), 0.0);
  for (const auto& spec : reactions) {
    auto s = net.find_complex(spec.source);
    auto t = net.find_complex(spec.target);
    kappa[*net.find_reaction(*s, *t)] = spec.kappa;
  }
  return MassActionSystem(std::move(net), std::move(kappa));
}

MassActionSystem MassActionSystem::scaled(double factor) const {
  std::vector<double> k = kappa_;
  for (double& v : k) v *= factor;
  return MassActionSystem(network_, std::move(k));
}

// ---------------------------------------------------------------------------
// States and measures

bool DiscreteState::nonnegative() const noexcept {
  return std::all_of(values.begin(), values.end(), [](std::int64_t v) { return v >= 0; });
}

DiscreteState operator+(const DiscreteState& x, std::span<const std::int64_t> v) {
  DiscreteState out = x;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += v[i];
  return out;
}

DiscreteState operator-(const DiscreteState& x, std::span<const std::int64_t> v) {
  DiscreteState out = x;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= v[i];
  return out;
}

Measure::Measure(std::map<DiscreteState, double> weights) {
  for (auto& [x, w] : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "measure weights must be finite and nonnegative");
    }
    if (w > 0.0) weights_.emplace(x, w);
  }
}

Measure Measure::point_mass(const DiscreteState& x) {
  Measure m;
  m.weights_.emplace(x, 1.0);
  m.normalized_ = true;
  return m;
}

void Measure::add(const DiscreteState& x, double w) {
  if (w < 0.0 || !std::isfinite(w)) {
    throw Error(ErrorCode::InvalidArgument, "measure weights must be finite and nonnegative");
  }
  if (w == 0.0) return;
  weights_[x] += w;
  normalized_ = false;
}

double Measure::operator()(const DiscreteState& x) const {
  auto it = weights_.find(x);
  return it == weights_.end() ? 0.0 : it->second;
}

std::vector<DiscreteState> Measure::support() const {
  std::vector<DiscreteState> out;
  out.reserve(weights_.size());
  for (const auto& [x, w] : weights_) out.push_back(x);
  return out;
}

double Measure::total() const noexcept {
  // Summed smallest-first for a reproducible, accurate total.
  std::vector<double> w;
  w.reserve(weights_.size());
  for (const auto& kv : weights_) w.push_back(kv.second);
  std::sort(w.begin(), w.end());
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

double Measure::max_weight() const noexcept {
  double m = 0.0;
  for (const auto& kv : weights_) m = std::max(m, kv.second);
  return m;
}

Measure Measure::normalized_copy() const {
  double t = total();
  if (weights_.empty() || !(t > 0.0)) throw Error(ErrorCode::EmptySupport, "cannot normalize the zero measure");
  Measure out;
  for (const auto& [x, w] : weights_) out.weights_.emplace(x, w / t);
  out.normalized_ = true;
  return out;
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Undetermined: return "undetermined";
  }
  return "undetermined";
}

bool balance_close(double lhs, double rhs, double tol) noexcept {
  return std::abs(lhs - rhs) <= tol * (1.0 + std::abs(lhs) + std::abs(rhs));
}

}  // namespace crn
