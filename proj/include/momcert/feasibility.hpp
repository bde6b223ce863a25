#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "momcert/polynomial.hpp"
#include "momcert/rational.hpp"

namespace momcert {

/// Linear system over exact rationals:
///   A u >= b,  C u = d,  and u >= 0 when `nonneg` is set.
/// Strict inequalities are the caller's business: every certificate set here
/// is a cone, so "u_i > 0" is posed as "u_i >= 1".
struct FeasibilitySystem {
  explicit FeasibilitySystem(std::size_t n, bool nonnegative = true) : n_vars(n), nonneg(nonnegative) {}

  std::size_t n_vars;
  bool nonneg;
  std::vector<RationalVector> ineq;
  RationalVector ineq_rhs;
  std::vector<RationalVector> eq;
  RationalVector eq_rhs;

  void add_ge(RationalVector row, Rational rhs);
  void add_le(RationalVector row, const Rational& rhs);
  void add_eq(RationalVector row, Rational rhs);
  /// u_var >= value
  void add_lower_bound(std::size_t var, const Rational& value);
};

/// Infeasibility certificate: y >= 0 on the inequality rows and free z on the
/// equality rows with y^T A + z^T C <= 0 (== 0 on free variables) and
/// y^T b + z^T d == 1. Combining the constraints with these weights yields
/// 0 >= 1.
struct DualRay {
  RationalVector ineq_weights;
  RationalVector eq_weights;
  bool operator==(const DualRay&) const = default;
};

struct FeasibilityOutcome {
  bool feasible = false;
  RationalVector point;  // set when feasible
  DualRay ray;           // set when infeasible
};

/// Decides feasibility exactly with a phase-1 simplex (Bland's rule, so it
/// always terminates). Both outcomes are re-verified before returning; a
/// failed re-verification throws std::logic_error. Throws DimensionMismatch
/// on malformed systems.
FeasibilityOutcome solve(const FeasibilitySystem& sys);

bool verify_point(const FeasibilitySystem& sys, std::span<const Rational> point);
bool verify_ray(const FeasibilitySystem& sys, const DualRay& ray);

/// Scales a rational point by the lcm of its denominators. Signs are
/// preserved, so every strict/weak sign condition of a cone system survives.
/// Throws std::domain_error if an entry listed in `must_be_positive` is <= 0.
IntVector integerize(std::span<const Rational> point, std::span<const std::size_t> must_be_positive = {});

/// Integer w >= 0 with nu w >= 0 and (nu w)_species >= 1, or nullopt if none
/// exists. Among witnesses, prefers one that also grows every other species
/// that can be grown jointly (checked greedily in index order), which makes
/// the returned bundle the largest-support one.
std::optional<IntVector> alternative_witness(const IntMatrix& nu, std::size_t species);

}  // namespace momcert
