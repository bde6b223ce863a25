#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace momcert {

// Exact rational in canonical form (GMP keeps numerator/denominator reduced).
using Rational = mpq_class;
using Integer = mpz_class;

using RationalVector = std::vector<Rational>;
using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;  // row-major

/// "p/q" for non-integers, "p" otherwise.
std::string to_string(const Rational& q);

/// Accepts "p", "-p", "p/q". Throws std::invalid_argument on malformed text
/// or zero denominator.
Rational parse_rational(std::string_view text);

/// Converts an integral rational to int64. Throws std::overflow_error if the
/// value is not integral or does not fit.
std::int64_t to_int64(const Rational& q);

inline Rational make_rational(std::int64_t v) { return Rational(static_cast<long>(v)); }

/// Least common multiple of denominators.
Integer denominator_lcm(const RationalVector& v);

}  // namespace momcert
