#include <doctest.h>

#include <cmath>
#include <random>

#include "momcert/polynomial.hpp"

using namespace momcert;

namespace {

Polynomial P(const char* text, std::size_t n = 2) { return parse_polynomial(text, n); }

Polynomial random_poly(std::mt19937_64& rng, std::size_t n, std::uint32_t max_deg, int n_terms) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 3);
  std::uniform_int_distribution<std::uint32_t> exp(0, max_deg);
  Polynomial p(n);
  for (int t = 0; t < n_terms; ++t) {
    std::vector<std::uint32_t> e(n);
    std::uint32_t total = 0;
    for (auto& v : e) {
      v = exp(rng);
      if (total + v > max_deg) v = max_deg - total;
      total += v;
    }
    p += Polynomial::monomial(Monomial(e), Rational(coef(rng), den(rng)));
  }
  return p;
}

IntVector random_point(std::mt19937_64& rng, std::size_t n, std::int64_t box) {
  std::uniform_int_distribution<std::int64_t> pick(0, box);
  IntVector x(n);
  for (auto& v : x) v = pick(rng);
  return x;
}

}  // namespace

TEST_CASE("addition is canonical") {
  CHECK((P("x1") + P("-x1")).is_zero());
  CHECK((P("x2^2") + P("x1")).to_string() == "x2^2 + x1");
  CHECK(P("x1*x2") + P("2*x1*x2") == P("3*x1*x2"));
  CHECK_THROWS_AS(P("x1") + P("x1", 3), DimensionMismatch);
}

TEST_CASE("scaling and multiplication") {
  CHECK(P("x1 - 1") * Rational(2) == P("2*x1 - 2"));
  CHECK(P("x1") * P("x1 - 1") == P("x1^2 - x1"));
  CHECK((P("x1^3 + x2") * Rational(0)).is_zero());
  CHECK((P("x1 + 1") * P("x2^2")).degree() == 3);
  CHECK_THROWS_AS(P("x1") * P("x1", 3), DimensionMismatch);
}

TEST_CASE("evaluation") {
  CHECK(P("x2^2").evaluate(IntVector{3, 4}) == 16);
  CHECK(P("x1*x2").evaluate(IntVector{0, 7}) == 0);
  CHECK(P("x1*(x1-1)/2").evaluate(IntVector{5, 0}) == 10);
  CHECK_THROWS_AS(P("x1").evaluate(IntVector{1}), DimensionMismatch);
}

TEST_CASE("text rendering follows graded-lex order") {
  CHECK(P("3/2 - 2*x1*x2 + x1^2").to_string() == "x1^2 - 2*x1*x2 + 3/2");
  CHECK(Polynomial(2).to_string() == "0");
  CHECK(P("-x2").to_string() == "-x2");
  CHECK(P("x1*x2^2 + x1^2*x2").to_string() == "x1^2*x2 + x1*x2^2");
}

TEST_CASE("parser accepts aliases and rejects junk") {
  std::vector<std::string> names{"A", "B"};
  CHECK(parse_polynomial("A*B + 2", 2, names) == P("x1*x2 + 2"));
  CHECK_THROWS_AS(parse_polynomial("x3", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("C", 2, names), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("x1 +", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("x1/x2", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("1/0", 2), std::invalid_argument);
}

TEST_CASE("divisibility by falling factorials") {
  CHECK(divisible_by_falling_factorial(P("x1^2 - x1"), 0, 2));
  CHECK_FALSE(divisible_by_falling_factorial(P("x1^2"), 0, 2));
  CHECK(divisible_by_falling_factorial(P("x1*x2"), 1, 1));
  CHECK(divisible_by_falling_factorial(Polynomial(2), 0, 3));
  CHECK_FALSE(divisible_by_falling_factorial(P("1"), 0, 1));
  CHECK(divisible_by_falling_factorial(P("x1"), 0, 0));
}

TEST_CASE("degree in a subset") {
  const std::vector<std::size_t> s2{1}, s1{0}, both{0, 1};
  CHECK(max_degree_in(P("x2^2"), s2) == 2);
  CHECK(max_degree_in(P("x1*x2"), s1) == 1);
  CHECK(max_degree_in(P("5"), both) == 0);
  CHECK(max_degree_in(Polynomial(2), both) == 0);
}

TEST_CASE("ring axioms hold at random lattice points") {
  std::mt19937_64 rng(20261019);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto p = random_poly(rng, n, 3, 4), q = random_poly(rng, n, 3, 4), r = random_poly(rng, n, 2, 3);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p + q == q + p);
    CHECK(p * q == q * p);
    for (int k = 0; k < 50; ++k) {
      const auto x = random_point(rng, n, 9);
      CHECK((p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x));
      CHECK((p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x));
      CHECK((p * (q + r)).evaluate(x) == (p * q + p * r).evaluate(x));
    }
  }
}

TEST_CASE("divisibility agrees with brute-force vanishing on the box") {
  std::mt19937_64 rng(77);
  int divisible_cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::size_t var = trial % n;
    const std::uint32_t order = 1 + static_cast<std::uint32_t>(trial % 3);
    auto p = random_poly(rng, n, 2, 3);
    // Half of the cases get a planted factor so both answers occur.
    if (trial % 2 == 0) p = p * Polynomial::falling_factorial(n, var, order);
    if (p.degree() > 4) continue;
    // Brute force: p vanishes on x_var = k for k < order over a 5^N box. A
    // polynomial of degree <= 4 in the remaining variables that vanishes on
    // 5 values per variable is identically zero there.
    bool vanishes = true;
    const std::size_t total = static_cast<std::size_t>(std::pow(5, n));
    for (std::uint32_t k = 0; k < order && vanishes; ++k)
      for (std::size_t code = 0; code < total && vanishes; ++code) {
        IntVector x(n);
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i, c /= 5) x[i] = static_cast<std::int64_t>(c % 5);
        x[var] = k;
        if (p.evaluate(x) != 0) vanishes = false;
      }
    CHECK(divisible_by_falling_factorial(p, var, order) == vanishes);
    divisible_cases += vanishes;
  }
  CHECK(divisible_cases > 50);
}
