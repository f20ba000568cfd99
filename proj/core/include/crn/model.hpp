#pragma once

// Core value types: species, complexes, reactions, networks, mass-action
// systems, states, measures and balance verdicts. Everything here is
// immutable once constructed.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

using IntVector = std::vector<std::int64_t>;

class SpeciesTable {
 public:
  SpeciesTable() = default;
  /// Validates identifiers: unique, `[A-Za-z_][A-Za-z0-9_]*`, not `0`.
  explicit SpeciesTable(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  static bool valid_identifier(std::string_view name) noexcept;

  friend bool operator==(const SpeciesTable&, const SpeciesTable&) = default;

 private:
  std::vector<std::string> names_;
};

/// Nonnegative stoichiometric coefficients indexed by species order.
struct Complex {
  std::vector<int> coeffs;

  bool is_zero() const noexcept;
  int max_coeff() const noexcept;  // ||y||_inf
  int molecularity() const noexcept;  // ||y||_1

  friend auto operator<=>(const Complex&, const Complex&) = default;
  friend bool operator==(const Complex&, const Complex&) = default;
};

struct Reaction {
  std::size_t source = 0;
  std::size_t target = 0;

  friend auto operator<=>(const Reaction&, const Reaction&) = default;
  friend bool operator==(const Reaction&, const Reaction&) = default;
};

class ReactionNetwork {
 public:
  /// The empty network (no species, complexes or reactions).
  ReactionNetwork() = default;

  const SpeciesTable& species() const noexcept { return species_; }
  const std::vector<Complex>& complexes() const noexcept { return complexes_; }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }

  std::size_t num_species() const noexcept { return species_.size(); }
  std::size_t num_complexes() const noexcept { return complexes_.size(); }
  std::size_t num_reactions() const noexcept { return reactions_.size(); }
  bool empty() const noexcept { return reactions_.empty(); }

  std::optional<std::size_t> find_complex(const Complex& y) const;
  std::optional<std::size_t> find_reaction(std::size_t source, std::size_t target) const;

  /// Reaction vector y' - y of reaction `r` (index into reactions()).
  IntVector reaction_vector(std::size_t r) const;

  /// Largest coefficient over all complexes.
  int max_complex_coeff() const noexcept;
  int max_molecularity() const noexcept;

  /// Human-readable complex, species in table order (`0` for the empty one).
  std::string complex_string(std::size_t i) const;
  std::string reaction_string(std::size_t r) const;

  friend bool operator==(const ReactionNetwork&, const ReactionNetwork&) = default;

 private:
  friend ReactionNetwork build_network(SpeciesTable, std::vector<Complex>,
                                       std::vector<Reaction>);
  SpeciesTable species_;
  std::vector<Complex> complexes_;
  std::vector<Reaction> reactions_;
};

/// Validates and canonicalizes a network. Reactions index into `complexes`;
/// duplicates among the complexes are merged, complexes are sorted
/// lexicographically and reactions are sorted by (source, target).
ReactionNetwork build_network(SpeciesTable species, std::vector<Complex> complexes,
                              std::vector<Reaction> reactions);

/// Reaction vector of `r`, which must be a reaction of `net`.
IntVector reaction_vector(const ReactionNetwork& net, const Reaction& r);

struct StoichiometricBasis {
  std::vector<IntVector> basis;      // spans the stoichiometric subspace
  std::vector<IntVector> conserved;  // spans its orthogonal complement

  std::size_t dimension() const noexcept { return basis.size(); }
};

/// Exact rational row reduction. Conserved vectors are scaled to primitive
/// integer vectors whose first nonzero entry is positive.
StoichiometricBasis stoichiometric_basis(const ReactionNetwork& net);

class MassActionSystem {
 public:
  MassActionSystem() = default;
  /// `kappa[i]` is the rate constant of `network.reactions()[i]`.
  MassActionSystem(ReactionNetwork network, std::vector<double> kappa);

  struct ReactionSpec {
    Complex source;
    Complex target;
    double kappa = 1.0;
  };
  /// Builds the network from (source, target, kappa) triples in any order.
  static MassActionSystem from_reactions(SpeciesTable species,
                                         const std::vector<ReactionSpec>& reactions);

  const ReactionNetwork& network() const noexcept { return network_; }
  const std::vector<double>& kappa() const noexcept { return kappa_; }
  double kappa(std::size_t r) const { return kappa_.at(r); }

  /// Same network, every rate constant multiplied by `factor`.
  MassActionSystem scaled(double factor) const;

  friend bool operator==(const MassActionSystem&, const MassActionSystem&) = default;

 private:
  ReactionNetwork network_;
  std::vector<double> kappa_;
};

/// Concentration vector.
struct DetState {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const DetState&, const DetState&) = default;
};

/// Molecule-count vector.
struct DiscreteState {
  IntVector values;

  std::size_t size() const noexcept { return values.size(); }
  std::int64_t operator[](std::size_t i) const { return values[i]; }
  std::int64_t& operator[](std::size_t i) { return values[i]; }
  bool nonnegative() const noexcept;

  friend auto operator<=>(const DiscreteState&, const DiscreteState&) = default;
  friend bool operator==(const DiscreteState&, const DiscreteState&) = default;
};

DiscreteState operator+(const DiscreteState& x, std::span<const std::int64_t> v);
DiscreteState operator-(const DiscreteState& x, std::span<const std::int64_t> v);

/// Finitely supported nonnegative weights on Z^n, ordered by state.
class Measure {
 public:
  Measure() = default;
  explicit Measure(std::map<DiscreteState, double> weights);

  static Measure point_mass(const DiscreteState& x);

  /// Adds `w` to the weight at `x`. Nonpositive contributions are rejected.
  void add(const DiscreteState& x, double w);

  double operator()(const DiscreteState& x) const;
  const std::map<DiscreteState, double>& weights() const noexcept { return weights_; }
  std::size_t support_size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  std::vector<DiscreteState> support() const;

  double total() const noexcept;
  double max_weight() const noexcept;
  bool normalized() const noexcept { return normalized_; }
  /// Rescales to total mass 1. Throws EmptySupport on the zero measure.
  Measure normalized_copy() const;

 private:
  std::map<DiscreteState, double> weights_;
  bool normalized_ = false;
};

enum class Status { Holds, Fails, Undetermined };

std::string_view to_string(Status s) noexcept;

/// The first violated balance equation found.
struct Witness {
  std::vector<double> state;
  std::string condition;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Verdict {
  Status status = Status::Undetermined;
  std::optional<Witness> witness;  // present iff status == Fails

  static Verdict holds() { return {Status::Holds, std::nullopt}; }
  static Verdict undetermined() { return {Status::Undetermined, std::nullopt}; }
  static Verdict fails(Witness w) { return {Status::Fails, std::move(w)}; }

  bool is_holds() const noexcept { return status == Status::Holds; }
  bool is_fails() const noexcept { return status == Status::Fails; }
};

/// |lhs - rhs| <= tol * (1 + |lhs| + |rhs|)
bool balance_close(double lhs, double rhs, double tol) noexcept;

}  // namespace crn
