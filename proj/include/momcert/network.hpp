#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "momcert/polynomial.hpp"
#include "momcert/rational.hpp"

namespace momcert {

/// Mass-action kinetics: rate * prod_i x_i (x_i - 1) ... (x_i - r_i + 1).
struct MassAction {
  Rational rate;
  IntVector reactants;  // multiplicity r_i per species
  bool operator==(const MassAction&) const = default;
};

struct Reaction {
  std::string name;
  IntVector jump;  // column nu_j, length N
  Polynomial propensity;
  std::optional<MassAction> mass_action;  // empty for raw polynomial kinetics
};

/// A chemical system (nu, a): integer jump vectors plus polynomial propensities.
/// Species and reaction indices are 0-based throughout the API.
class ReactionNetwork {
 public:
  explicit ReactionNetwork(std::vector<std::string> species_names);

  /// Adds a reaction with the given jump column and propensity.
  /// Throws DimensionMismatch if either lives in the wrong dimension.
  void add_reaction(Reaction reaction);
  void add_mass_action(std::string name, const IntVector& reactants, const IntVector& products,
                       const Rational& rate);
  void add_polynomial(std::string name, IntVector jump, Polynomial propensity);

  std::size_t n_species() const { return species_.size(); }
  std::size_t n_reactions() const { return reactions_.size(); }
  const std::vector<std::string>& species_names() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t j) const { return reactions_.at(j); }
  const Polynomial& propensity(std::size_t j) const { return reactions_.at(j).propensity; }

  /// N x M stoichiometric matrix, row i = species i.
  IntMatrix stoichiometry() const;
  /// Max total degree over all propensities.
  std::uint32_t max_propensity_degree() const;

  const std::optional<IntVector>& initial_state() const { return init_; }
  void set_initial_state(IntVector x0);

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
  std::optional<IntVector> init_;
};

/// Result of building one mass-action reaction.
struct MassActionReaction {
  IntVector jump;
  Polynomial propensity;
};

/// Jump = products - reactants; propensity = rate * prod of falling factorials.
/// Throws std::invalid_argument on nonpositive rate or negative multiplicities.
MassActionReaction build_mass_action(const IntVector& reactants, const IntVector& products,
                                     const Rational& rate);

struct ProperVerdict {
  bool proper = true;
  std::optional<std::size_t> species;  // species whose falling factorial does not divide a_j
  std::optional<IntVector> witness;    // lattice x with x + nu_j outside Z_+^N and a_j(x) != 0
  bool operator==(const ProperVerdict&) const = default;
};

/// Exact properness per reaction: a_j must be divisible by the falling factorial
/// of order -nu_ij in x_i for every consumed species i.
std::vector<ProperVerdict> validate_properness(const ReactionNetwork& net);
bool all_proper(const std::vector<ProperVerdict>& verdicts);

enum class RegularityStatus {
  Analytic,      // mass action whose reactant needs equal the consumed amounts
  RegularOnBox,  // checked exhaustively on {0..B}^N
  Violation,     // some x with x + nu_j in Z_+^N and a_j(x) <= 0
  Unchecked,     // box too large to enumerate
};

std::string_view to_string(RegularityStatus s);

struct RegularityVerdict {
  RegularityStatus status = RegularityStatus::Unchecked;
  std::vector<IntVector> violations;  // first few violating states, enumeration order
  bool operator==(const RegularityVerdict&) const = default;
};

/// Checks the "only if" direction of regularity, a_j(x) > 0 whenever x + nu_j
/// stays in the lattice, on the box {0..box}^N. Assumes properness.
std::vector<RegularityVerdict> check_regularity(const ReactionNetwork& net, std::int64_t box);

struct NonnegativityVerdict {
  bool nonnegative_on_box = true;
  bool checked = true;
  std::optional<IntVector> witness;  // first state with a_j(x) < 0
  bool operator==(const NonnegativityVerdict&) const = default;
};

/// Raw-polynomial propensities must be nonnegative on the lattice; this only
/// checks {0..box}^N. Mass-action reactions pass analytically.
std::vector<NonnegativityVerdict> check_nonnegativity(const ReactionNetwork& net, std::int64_t box);

/// Drift F(x) = sum_j nu_j a_j(x), one polynomial per species.
struct DriftVector {
  std::vector<Polynomial> components;
  RationalVector evaluate(std::span<const std::int64_t> x) const;
};

DriftVector drift(const ReactionNetwork& net);

/// gamma^T F. Throws std::invalid_argument unless gamma has length N and is
/// strictly positive.
Polynomial weighted_drift(const ReactionNetwork& net, const RationalVector& gamma);

}  // namespace momcert
