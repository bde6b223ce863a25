#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "momcert/rational.hpp"

namespace momcert {

/// Thrown when operands live in different variable spaces.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vector x1^e1 ... xN^eN.
class Monomial {
 public:
  explicit Monomial(std::size_t nvars) : exponents_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exponents) : exponents_(std::move(exponents)) {}

  static Monomial unit(std::size_t nvars, std::size_t var, std::uint32_t power = 1);

  std::size_t nvars() const { return exponents_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exponents_; }

  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::span<const std::size_t> subset) const;
  /// Nonzero exponents appear only at `var`; the constant monomial is not pure.
  bool is_pure_power_of(std::size_t var) const;

  Monomial operator*(const Monomial& other) const;
  bool operator==(const Monomial&) const = default;

 private:
  std::vector<std::uint32_t> exponents_;
};

/// Graded lexicographic order, largest first: higher total degree wins, ties
/// broken by the first differing exponent (larger exponent of x1 first).
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// No stored coefficient is ever zero, so equality of term maps is equality
/// of polynomials.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexDescending>;

  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t var);
  static Polynomial monomial(const Monomial& m, const Rational& c);
  /// x_var (x_var - 1) ... (x_var - order + 1); order 0 gives 1.
  static Polynomial falling_factorial(std::size_t nvars, std::size_t var, std::uint32_t order);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; 0 for the zero polynomial.
  std::uint32_t degree() const;
  Rational coefficient(const Monomial& m) const;
  bool has_negative_coefficient() const;
  bool has_integer_coefficients() const;

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const {
    return nvars_ == other.nvars_ && terms_ == other.terms_;
  }

  Rational evaluate(std::span<const std::int64_t> x) const;

  /// Canonical text: graded-lex descending, e.g. "x1^2 - 2*x1*x2 + 3/2".
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Rational& c);

  std::size_t nvars_;
  TermMap terms_;
};

/// True iff p is divisible by the falling factorial x_var (x_var-1)...(x_var-order+1),
/// decided by exact synthetic division by x_var - k for k = 0..order-1.
/// `var` is 0-based.
bool divisible_by_falling_factorial(const Polynomial& p, std::size_t var, std::uint32_t order);

/// Max over terms of the degree restricted to `subset` (0-based indices).
std::uint32_t max_degree_in(const Polynomial& p, std::span<const std::size_t> subset);

/// Parses +, -, *, ^ (nonnegative integer exponents), parentheses, integer and
/// "p/q" literals, and division by constants. Variables are x1..xN, or any of
/// `aliases` (aliases[i] names variable i). Throws std::invalid_argument.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars,
                            std::span<const std::string> aliases = {});

}  // namespace momcert
