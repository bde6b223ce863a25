#include "momcert/feasibility.hpp"

#include <algorithm>

namespace momcert {

void FeasibilitySystem::add_ge(RationalVector row, Rational rhs) {
  if (row.size() != n_vars) throw DimensionMismatch("constraint row has wrong length");
  ineq.push_back(std::move(row));
  ineq_rhs.push_back(std::move(rhs));
}

void FeasibilitySystem::add_le(RationalVector row, const Rational& rhs) {
  for (auto& a : row) a = -a;
  add_ge(std::move(row), -rhs);
}

void FeasibilitySystem::add_eq(RationalVector row, Rational rhs) {
  if (row.size() != n_vars) throw DimensionMismatch("constraint row has wrong length");
  eq.push_back(std::move(row));
  eq_rhs.push_back(std::move(rhs));
}

void FeasibilitySystem::add_lower_bound(std::size_t var, const Rational& value) {
  RationalVector row(n_vars, Rational(0));
  row.at(var) = 1;
  add_ge(std::move(row), value);
}

namespace {

void check_shape(const FeasibilitySystem& sys) {
  if (sys.ineq.size() != sys.ineq_rhs.size() || sys.eq.size() != sys.eq_rhs.size())
    throw DimensionMismatch("row/rhs count mismatch");
  for (const auto& r : sys.ineq)
    if (r.size() != sys.n_vars) throw DimensionMismatch("inequality row has wrong length");
  for (const auto& r : sys.eq)
    if (r.size() != sys.n_vars) throw DimensionMismatch("equality row has wrong length");
}

Rational row_dot(const RationalVector& row, std::span<const Rational> u) {
  Rational s = 0;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) s += row[j] * u[j];
  return s;
}

// Dense phase-1 tableau over standard form A' x = b', x >= 0, b' >= 0 with one
// artificial per row.
class Phase1 {
 public:
  explicit Phase1(const FeasibilitySystem& sys) : sys_(sys) {
    n_struct_ = sys.nonneg ? sys.n_vars : 2 * sys.n_vars;
    n_surplus_ = sys.ineq.size();
    rows_ = sys.ineq.size() + sys.eq.size();
    art0_ = n_struct_ + n_surplus_;
    rhs_ = art0_ + rows_;
    t_.assign(rows_, RationalVector(rhs_ + 1, Rational(0)));
    sign_.assign(rows_, 1);
    basis_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const bool is_ineq = r < sys.ineq.size();
      const auto& a = is_ineq ? sys.ineq[r] : sys.eq[r - sys.ineq.size()];
      const auto& b = is_ineq ? sys.ineq_rhs[r] : sys.eq_rhs[r - sys.ineq.size()];
      sign_[r] = b < 0 ? -1 : 1;
      const Rational s(sign_[r]);
      for (std::size_t j = 0; j < sys.n_vars; ++j) {
        t_[r][j] = s * a[j];
        if (!sys.nonneg) t_[r][sys.n_vars + j] = -s * a[j];
      }
      if (is_ineq) t_[r][n_struct_ + r] = -s;
      t_[r][art0_ + r] = 1;
      t_[r][rhs_] = s * b;
      basis_[r] = art0_ + r;
    }
  }

  // Returns the phase-1 optimum (sum of artificials).
  Rational run() {
    RationalVector cost(rhs_ + 1, Rational(0));
    for (;;) {
      // Reduced costs d_j = c_j - c_B^T B^{-1} A_j; c = 1 on artificials.
      std::fill(cost.begin(), cost.end(), Rational(0));
      for (std::size_t j = art0_; j < rhs_; ++j) cost[j] = 1;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (basis_[r] < art0_) continue;
        for (std::size_t j = 0; j <= rhs_; ++j)
          if (t_[r][j] != 0) cost[j] -= t_[r][j];
      }
      // cost[rhs_] now holds -objective.
      // Bland: entering column = lowest index with negative reduced cost.
      std::size_t enter = rhs_;
      for (std::size_t j = 0; j < rhs_; ++j) {
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == rhs_) return -cost[rhs_];
      // Ratio test; ties go to the smallest basic index.
      std::size_t leave = rows_;
      Rational best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (t_[r][enter] <= 0) continue;
        Rational ratio = t_[r][rhs_] / t_[r][enter];
        if (leave == rows_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      // Phase-1 objective is bounded below by 0, so some row must qualify.
      if (leave == rows_) throw std::logic_error("phase-1 simplex reported an unbounded direction");
      pivot(leave, enter);
    }
  }

  RationalVector point() const {
    RationalVector x(n_struct_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r)
      if (basis_[r] < n_struct_) x[basis_[r]] = t_[r][rhs_];
    RationalVector u(sys_.n_vars);
    for (std::size_t j = 0; j < sys_.n_vars; ++j) u[j] = sys_.nonneg ? x[j] : x[j] - x[sys_.n_vars + j];
    return u;
  }

  // pi = c_B^T B^{-1}; B^{-1} sits in the artificial columns.
  DualRay ray(const Rational& objective) const {
    RationalVector pi(rows_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < art0_) continue;
      for (std::size_t k = 0; k < rows_; ++k) pi[k] += t_[r][art0_ + k];
    }
    DualRay ray;
    for (std::size_t k = 0; k < rows_; ++k) {
      Rational w = pi[k] * sign_[k] / objective;
      if (k < sys_.ineq.size()) ray.ineq_weights.push_back(std::move(w));
      else ray.eq_weights.push_back(std::move(w));
    }
    return ray;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    const Rational p = t_[row][col];
    for (auto& v : t_[row]) v /= p;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row || t_[r][col] == 0) continue;
      const Rational f = t_[r][col];
      for (std::size_t j = 0; j <= rhs_; ++j)
        if (t_[row][j] != 0) t_[r][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  const FeasibilitySystem& sys_;
  std::size_t n_struct_ = 0, n_surplus_ = 0, rows_ = 0, art0_ = 0, rhs_ = 0;
  std::vector<RationalVector> t_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
};

}  // namespace

bool verify_point(const FeasibilitySystem& sys, std::span<const Rational> u) {
  if (u.size() != sys.n_vars) return false;
  if (sys.nonneg && std::any_of(u.begin(), u.end(), [](const Rational& v) { return v < 0; })) return false;
  for (std::size_t r = 0; r < sys.ineq.size(); ++r)
    if (row_dot(sys.ineq[r], u) < sys.ineq_rhs[r]) return false;
  for (std::size_t r = 0; r < sys.eq.size(); ++r)
    if (row_dot(sys.eq[r], u) != sys.eq_rhs[r]) return false;
  return true;
}

bool verify_ray(const FeasibilitySystem& sys, const DualRay& ray) {
  if (ray.ineq_weights.size() != sys.ineq.size() || ray.eq_weights.size() != sys.eq.size()) return false;
  Rational rhs = 0;
  RationalVector combo(sys.n_vars, Rational(0));
  for (std::size_t r = 0; r < sys.ineq.size(); ++r) {
    const auto& y = ray.ineq_weights[r];
    if (y < 0) return false;
    if (y == 0) continue;
    rhs += y * sys.ineq_rhs[r];
    for (std::size_t j = 0; j < sys.n_vars; ++j) combo[j] += y * sys.ineq[r][j];
  }
  for (std::size_t r = 0; r < sys.eq.size(); ++r) {
    const auto& z = ray.eq_weights[r];
    if (z == 0) continue;
    rhs += z * sys.eq_rhs[r];
    for (std::size_t j = 0; j < sys.n_vars; ++j) combo[j] += z * sys.eq[r][j];
  }
  if (rhs <= 0) return false;
  for (const auto& c : combo)
    if (sys.nonneg ? c > 0 : c != 0) return false;
  return true;
}

FeasibilityOutcome solve(const FeasibilitySystem& sys) {
  check_shape(sys);
  Phase1 lp(sys);
  const Rational objective = lp.run();
  FeasibilityOutcome out;
  if (objective == 0) {
    out.feasible = true;
    out.point = lp.point();
    if (!verify_point(sys, out.point)) throw std::logic_error("simplex point failed re-verification");
  } else {
    out.ray = lp.ray(objective);
    if (!verify_ray(sys, out.ray)) throw std::logic_error("simplex dual ray failed re-verification");
  }
  return out;
}

IntVector integerize(std::span<const Rational> point, std::span<const std::size_t> must_be_positive) {
  for (auto i : must_be_positive)
    if (i >= point.size() || point[i] <= 0)
      throw std::domain_error("integerize: required-positive entry is not positive");
  const Integer scale = denominator_lcm(RationalVector(point.begin(), point.end()));
  IntVector out;
  out.reserve(point.size());
  for (const auto& q : point) out.push_back(to_int64(Rational(q * scale)));
  return out;
}

namespace {

FeasibilitySystem witness_system(const IntMatrix& nu, const std::vector<std::size_t>& grown) {
  const auto m = nu.empty() ? 0 : nu.front().size();
  FeasibilitySystem sys(m);
  for (std::size_t k = 0; k < nu.size(); ++k) {
    RationalVector row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = make_rational(nu[k][j]);
    const bool grow = std::find(grown.begin(), grown.end(), k) != grown.end();
    sys.add_ge(std::move(row), Rational(grow ? 1 : 0));
  }
  return sys;
}

}  // namespace

std::optional<IntVector> alternative_witness(const IntMatrix& nu, std::size_t species) {
  if (species >= nu.size()) throw std::out_of_range("species index out of range");
  std::vector<std::size_t> grown{species};
  auto best = solve(witness_system(nu, grown));
  if (!best.feasible) return std::nullopt;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (k == species) continue;
    grown.push_back(k);
    auto trial = solve(witness_system(nu, grown));
    if (trial.feasible) best = std::move(trial);
    else grown.pop_back();
  }
  return integerize(best.point);
}

}  // namespace momcert
