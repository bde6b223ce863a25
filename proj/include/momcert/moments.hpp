#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "momcert/boundedness.hpp"
#include "momcert/feasibility.hpp"
#include "momcert/network.hpp"

namespace momcert {

enum class MomentTheorem { T1, T2, T3 };
std::string to_string(MomentTheorem t);

/// Certificate that every moment E||X(t)||^r exists and grows at most
/// exponentially: E||X(t)||^r <= E||X(0)||^r e^{mu_r t} + e^{mu_r t} - 1.
struct MomentCertificate {
  MomentTheorem theorem = MomentTheorem::T1;
  // T1: weights on the critical species (critical order), gamma^T nu^c <= 0.
  // T2: weights on all species, gamma^T F has nonpositive coefficients of degree >= 2.
  RationalVector gamma;
  // T1 only: full weighted norm over all species (original order), built as
  // (gamma + beta_critical, beta_noncritical) from a boundedness certificate
  // beta of the non-critical species.
  IntVector norm_weights;
  bool vacuous = false;  // T1 with no critical reactions
  // T2 only: gamma^T F(x) <= C (||x||_1 + 1) on the lattice.
  Rational C = 0;
  std::vector<std::size_t> neutral_reactions;  // T2: gamma^T nu_j == 0
  bool verified = false;
  std::size_t spot_checks = 0;
  bool operator==(const MomentCertificate&) const = default;
};

/// Certificate that E||X(t)||^r = infinity at some finite t for r >= r_min:
/// gamma^T F(x) >= C ||x||_1^alpha_exp on the lattice.
struct BlowupCertificate {
  RationalVector gamma;
  std::uint32_t alpha_exp = 2;
  Rational C = 0;
  std::uint32_t r_min = 0;
  std::string notes;
  bool verified = false;
  std::size_t spot_checks = 0;
  bool operator==(const BlowupCertificate&) const = default;
};

/// The checker could not certify. For T1 this means the system is infeasible
/// (with a ray); for T2/T3 it only means the coefficientwise test failed.
struct CheckFailure {
  std::string reason;
  std::optional<DualRay> ray;
  std::vector<std::size_t> offending_reactions;
  bool operator==(const CheckFailure&) const = default;
};

using MomentOutcome = std::variant<MomentCertificate, CheckFailure>;
using BlowupOutcome = std::variant<BlowupCertificate, CheckFailure>;

inline constexpr std::size_t kSpotChecks = 200;
inline constexpr std::int64_t kSpotCheckBox = 50;

/// Solves gamma in Z_+^{Nc}, gamma >= 1, gamma^T nu^c <= 0.
MomentOutcome check_t1(const ReactionNetwork& net, const CriticalPartition& partition);

/// LP over gamma >= 1: every degree >= 2 coefficient of gamma^T F is <= 0 and
/// gamma^T nu_j == 0 for every reaction of degree > 2.
MomentOutcome check_t2(const ReactionNetwork& net);

/// Scans alpha_exp = 2..max degree for gamma >= 1 with all coefficients of
/// gamma^T F >= 0 and per-species pure-power mass >= 1 at exponents >= alpha_exp.
BlowupOutcome check_t3(const ReactionNetwork& net, const IntVector& x0);

/// Exact re-verification. T1 also rechecks the full norm.
bool verify_t1(const MomentCertificate& cert, const ReactionNetwork& net, const CriticalPartition& partition);
bool verify_t2(const MomentCertificate& cert, const ReactionNetwork& net);
bool verify_t3(const BlowupCertificate& cert, const ReactionNetwork& net, const IntVector& x0);

/// Evaluates the claimed inequality at `count` pseudo-random lattice points of
/// {0..box}^N (fixed seed), exactly. Returns the number of points checked, or
/// nullopt at the first violation.
std::optional<std::size_t> spot_check_t2(const MomentCertificate& cert, const ReactionNetwork& net,
                                               std::size_t count = kSpotChecks, std::int64_t box = kSpotCheckBox);
std::optional<std::size_t> spot_check_t3(const BlowupCertificate& cert, const ReactionNetwork& net,
                                               std::size_t count = kSpotChecks, std::int64_t box = kSpotCheckBox);

}  // namespace momcert
