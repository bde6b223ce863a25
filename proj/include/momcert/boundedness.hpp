#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "momcert/network.hpp"
#include "momcert/rational.hpp"

namespace momcert {

/// alpha >= 0 with alpha_i >= 1 on `covered` and alpha^T nu <= 0: the weighted
/// total sum(alpha_i X_i) never increases, which bounds every covered species.
struct BoundednessCertificate {
  IntVector alpha;
  std::vector<std::size_t> covered;
  bool operator==(const BoundednessCertificate&) const = default;
};

/// w >= 0 with nu w >= 0 and (nu w)_species >= 1: a firing bundle that grows
/// the species without a net loss of anything.
struct UnboundednessWitness {
  IntVector w;
  std::size_t species = 0;
  IntVector growth;  // nu w
  bool operator==(const UnboundednessWitness&) const = default;
};

using SpeciesBoundedness = std::variant<BoundednessCertificate, UnboundednessWitness>;

bool verify(const BoundednessCertificate& cert, const IntMatrix& nu);
bool verify(const UnboundednessWitness& wit, const IntMatrix& nu);

inline bool is_bounded(const SpeciesBoundedness& s) {
  return std::holds_alternative<BoundednessCertificate>(s);
}

/// Exactly one outcome, always self-verified. Depends only on nu (never on an
/// initial state). `nu` is N x M, row-major.
SpeciesBoundedness decide_species_boundedness(const IntMatrix& nu, std::size_t species);

struct SubsetBoundedness {
  std::optional<BoundednessCertificate> certificate;  // covers all of the subset
  std::vector<std::size_t> unbounded;                 // members that are not
  std::vector<std::size_t> boundable;                 // members that are
  std::optional<BoundednessCertificate> boundable_certificate;
};

/// Certificates add, so a subset is certifiable iff each member is.
SubsetBoundedness decide_subset_boundedness(const IntMatrix& nu, std::span<const std::size_t> subset);

/// Critical species are the stoichiometrically unbounded ones; a reaction is
/// critical when its propensity has degree >= 2 in the critical variables.
struct CriticalPartition {
  std::vector<std::size_t> critical_species;
  std::vector<std::size_t> noncritical_species;
  std::vector<std::size_t> critical_reactions;
  std::vector<std::size_t> noncritical_reactions;
  IntMatrix nu1;  // critical rows, all columns
  IntMatrix nu2;  // non-critical rows, all columns
  IntMatrix nuc;  // critical rows x critical columns
  // Critical-first orderings: order[new] = original, position[original] = new.
  std::vector<std::size_t> species_order, species_position;
  std::vector<std::size_t> reaction_order, reaction_position;
  std::vector<SpeciesBoundedness> species_outcomes;  // by original index
  // Set when some propensity has negative coefficients, where the degree test
  // is a conservative stand-in for the growth bound.
  bool sign_mixed = false;

  std::size_t n_critical_species() const { return critical_species.size(); }
  std::size_t n_critical_reactions() const { return critical_reactions.size(); }
};

CriticalPartition classify(const ReactionNetwork& net);

/// alpha >= 1 with alpha^T nu_j <= 0 for every j in `reactions`, so the
/// weighted 1-norm never grows under those jumps; nullopt if none exists.
std::optional<IntVector> construct_monotone_norm(const IntMatrix& nu, std::span<const std::size_t> reactions);
bool verify_monotone_norm(const IntMatrix& nu, std::span<const std::size_t> reactions, const IntVector& alpha);

struct ExplorationCaps {
  std::size_t max_states = 100000;
  std::int64_t max_coord = 1000;
};

/// Breadth-first closure of x0 under enabled jumps (a_j(x) > 0). Every state
/// keeps its BFS parent, so a firing path from x0 can be rebuilt.
struct AccessibleSetSample {
  std::vector<IntVector> states;  // BFS discovery order, states[0] == x0
  std::vector<std::size_t> parent;
  std::vector<std::size_t> via_reaction;  // reaction fired from parent
  bool frontier_exhausted = false;
  bool cap_hit = false;

  /// Reactions fired from x0 to states[k].
  std::vector<std::size_t> path_to(std::size_t k) const;
  std::optional<std::size_t> find(const IntVector& x) const;
};

AccessibleSetSample explore_accessible(const ReactionNetwork& net, const IntVector& x0,
                                       const ExplorationCaps& caps = {});

/// Incremental firing schedule; partial_sums[0] == 0 and consecutive entries
/// differ in exactly one component by +1.
struct CountingSequence {
  std::vector<std::size_t> firings;
  std::vector<IntVector> partial_sums;
};

struct UnboundednessThreshold {
  IntVector xbar;
  CountingSequence sequence;
};

/// Fires reactions in ascending index order, reaction j repeated w_j times, and
/// takes xbar_i = max(0, -(nu u_l)_i) over all partial sums, so every x >= xbar
/// runs the whole bundle inside the lattice.
UnboundednessThreshold unboundedness_threshold(const IntMatrix& nu, const IntVector& w);

}  // namespace momcert
