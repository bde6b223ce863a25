#include <doctest.h>

#include <random>

#include "momcert/feasibility.hpp"

using namespace momcert;

namespace {

RationalVector R(std::initializer_list<long> v) {
  RationalVector out;
  for (auto x : v) out.emplace_back(x);
  return out;
}

IntMatrix random_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 4), entry(-3, 3);
  const int n = dim(rng), m = dim(rng);
  IntMatrix nu(n, IntVector(m));
  for (auto& row : nu)
    for (auto& v : row) v = entry(rng);
  return nu;
}

}  // namespace

TEST_CASE("conservation system is feasible") {
  FeasibilitySystem sys(2);
  sys.add_lower_bound(0, Rational(1));
  sys.add_lower_bound(1, Rational(1));
  sys.add_le(R({-1, 1}), Rational(0));
  sys.add_le(R({1, -1}), Rational(0));
  const auto out = solve(sys);
  REQUIRE(out.feasible);
  CHECK(verify_point(sys, out.point));
  CHECK(out.point[0] == out.point[1]);
  CHECK(out.point[0] >= 1);
}

TEST_CASE("Example 5 T1 system is infeasible with a verified ray") {
  FeasibilitySystem sys(2);
  sys.add_lower_bound(0, Rational(1));
  sys.add_lower_bound(1, Rational(1));
  sys.add_le(R({2, -1}), Rational(0));
  sys.add_le(R({-1, 1}), Rational(0));
  // gamma^T nu <= 0 for nu1 = (2,-1), nu2 = (-1,1).
  const auto out = solve(sys);
  CHECK_FALSE(out.feasible);
  CHECK(verify_ray(sys, out.ray));
  // The ray must be nonnegative on the inequality rows.
  for (const auto& y : out.ray.ineq_weights) CHECK(y >= 0);
}

TEST_CASE("empty system is feasible at the origin") {
  FeasibilitySystem sys(1);
  const auto out = solve(sys);
  REQUIRE(out.feasible);
  CHECK(out.point == R({0}));
}

TEST_CASE("equalities and free variables") {
  FeasibilitySystem sys(2, false);
  sys.add_eq(R({1, 1}), Rational(-3));
  sys.add_ge(R({1, 0}), Rational(-5));
  const auto out = solve(sys);
  REQUIRE(out.feasible);
  CHECK(verify_point(sys, out.point));

  FeasibilitySystem bad(1, false);
  bad.add_eq(R({1}), Rational(2));
  bad.add_eq(R({2}), Rational(3));
  const auto o2 = solve(bad);
  CHECK_FALSE(o2.feasible);
  CHECK(verify_ray(bad, o2.ray));
}

TEST_CASE("malformed systems are rejected") {
  FeasibilitySystem sys(2);
  CHECK_THROWS_AS(sys.add_ge(R({1}), Rational(0)), DimensionMismatch);
  CHECK_THROWS_AS(sys.add_eq(R({1, 2, 3}), Rational(0)), DimensionMismatch);
  // Rows pushed directly past the checked adders are caught by the solver.
  sys.ineq.push_back(R({1}));
  sys.ineq_rhs.push_back(Rational(0));
  CHECK_THROWS_AS(solve(sys), DimensionMismatch);
  sys.ineq.back() = R({1, 1});
  CHECK(solve(sys).feasible);
  sys.ineq_rhs.push_back(Rational(1));
  CHECK_THROWS_AS(solve(sys), DimensionMismatch);

}

TEST_CASE("a wrong point or ray fails verification") {
  FeasibilitySystem sys(1);
  sys.add_lower_bound(0, Rational(2));
  CHECK_FALSE(verify_point(sys, R({1})));
  CHECK(verify_point(sys, R({2})));
  CHECK_FALSE(verify_ray(sys, DualRay{R({1}), {}}));
}

TEST_CASE("integerize") {
  CHECK(integerize(RationalVector{Rational(1, 2), Rational(3, 2)}) == IntVector{1, 3});
  CHECK(integerize(R({1, 1})) == IntVector{1, 1});
  CHECK(integerize(RationalVector{Rational(2, 3), Rational(1, 6), Rational(1)}) == IntVector{4, 1, 6});
  const std::vector<std::size_t> first{0};
  CHECK_THROWS_AS(integerize(R({0, 1}), first), std::domain_error);
}

TEST_CASE("alternative witness") {
  const auto w1 = alternative_witness({{3, -2}, {-2, 3}}, 0);
  REQUIRE(w1);
  CHECK(*w1 == IntVector{1, 1});
  CHECK_FALSE(alternative_witness({{-1, 1}, {1, -1}}, 0));
  CHECK_FALSE(alternative_witness({{-1}, {0}}, 0));
  const auto w2 = alternative_witness({{2, -1}, {-1, 1}}, 0);
  REQUIRE(w2);
  CHECK(*w2 == IntVector{2, 3});
}

TEST_CASE("exclusivity and brute-force agreement on random matrices") {
  std::mt19937_64 rng(1234);
  int bounded = 0, unbounded = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto nu = random_matrix(rng);
    const std::size_t n = nu.size(), m = nu[0].size();
    for (std::size_t i = 0; i < n; ++i) {
      FeasibilitySystem sys(n);
      sys.add_lower_bound(i, Rational(1));
      for (std::size_t j = 0; j < m; ++j) {
        RationalVector row;
        for (std::size_t k = 0; k < n; ++k) row.emplace_back(static_cast<long>(nu[k][j]));
        sys.add_le(std::move(row), Rational(0));
      }
      const auto out = solve(sys);
      const auto w = alternative_witness(nu, i);
      CHECK(out.feasible != w.has_value());
      if (out.feasible) {
        ++bounded;
        CHECK(verify_point(sys, out.point));
      } else {
        ++unbounded;
        CHECK(verify_ray(sys, out.ray));
        REQUIRE(w);
        for (std::size_t k = 0; k < n; ++k) {
          std::int64_t g = 0;
          for (std::size_t j = 0; j < m; ++j) g += nu[k][j] * (*w)[j];
          CHECK(g >= (k == i ? 1 : 0));
        }
      }
      // Brute force over alpha in {0..6}^N.
      bool oracle = false;
      std::size_t total = 1;
      for (std::size_t k = 0; k < n; ++k) total *= 7;
      for (std::size_t code = 0; code < total && !oracle; ++code) {
        IntVector a(n);
        std::size_t c = code;
        for (std::size_t k = 0; k < n; ++k, c /= 7) a[k] = static_cast<std::int64_t>(c % 7);
        if (a[i] < 1) continue;
        bool ok = true;
        for (std::size_t j = 0; j < m && ok; ++j) {
          std::int64_t s = 0;
          for (std::size_t k = 0; k < n; ++k) s += a[k] * nu[k][j];
          ok = s <= 0;
        }
        oracle = ok;
      }
      if (oracle) CHECK(out.feasible);
    }
  }
  CHECK(bounded > 20);
  CHECK(unbounded > 20);
}
