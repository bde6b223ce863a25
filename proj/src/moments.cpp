#include "momcert/moments.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace momcert {

std::string to_string(MomentTheorem t) {
  switch (t) {
    case MomentTheorem::T1: return "T1";
    case MomentTheorem::T2: return "T2";
    case MomentTheorem::T3: return "T3";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kSpotCheckSeed = 0x6d6f6d63657274ULL;

using CoefficientRows = std::map<Monomial, RationalVector, GrlexDescending>;

// For each monomial m of the drift, the linear form gamma -> coefficient of m
// in gamma^T F, stored as its row of coefficients over gamma.
CoefficientRows drift_coefficient_rows(const ReactionNetwork& net) {
  const auto f = drift(net);
  const auto n = net.n_species();
  CoefficientRows rows;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [m, c] : f.components[i].terms()) {
      auto [it, _] = rows.try_emplace(m, RationalVector(n, Rational(0)));
      it->second[i] = c;
    }
  return rows;
}

RationalVector jump_row(const Reaction& r) {
  RationalVector row;
  for (auto v : r.jump) row.push_back(make_rational(v));
  return row;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string describe_reactions(const ReactionNetwork& net, const std::vector<std::size_t>& js) {
  std::ostringstream out;
  for (std::size_t k = 0; k < js.size(); ++k) out << (k ? ", " : "") << net.reaction(js[k]).name;
  return out.str();
}

IntVector random_point(std::mt19937_64& rng, std::size_t n, std::int64_t box) {
  std::uniform_int_distribution<std::int64_t> pick(0, box);
  IntVector x(n);
  for (auto& v : x) v = pick(rng);
  return x;
}

Rational one_norm(const IntVector& x) {
  std::int64_t s = 0;
  for (auto v : x) s += v;
  return make_rational(s);
}

Rational power(const Rational& base, std::uint32_t e) {
  Rational r = 1;
  for (std::uint32_t k = 0; k < e; ++k) r *= base;
  return r;
}

// Norm monotonicity under critical jumps at random lattice points where the
// jump stays in the lattice.
std::optional<std::size_t> spot_check_t1(const MomentCertificate& cert, const ReactionNetwork& net,
                                               const CriticalPartition& partition) {
  std::mt19937_64 rng(kSpotCheckSeed);
  std::size_t checked = 0;
  for (std::size_t k = 0; k < kSpotChecks; ++k) {
    const auto x = random_point(rng, net.n_species(), kSpotCheckBox);
    std::int64_t before = 0;
    for (std::size_t i = 0; i < x.size(); ++i) before += cert.norm_weights[i] * x[i];
    for (auto j : partition.critical_reactions) {
      std::int64_t after = 0;
      bool inside = true;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto y = x[i] + net.reaction(j).jump[i];
        inside = inside && y >= 0;
        after += cert.norm_weights[i] * y;
      }
      if (inside && after > before) return std::nullopt;
    }
    ++checked;
  }
  return checked;
}

}  // namespace

// ---------------------------------------------------------------------------
// T1

MomentOutcome check_t1(const ReactionNetwork& net, const CriticalPartition& partition) {
  const auto nc = partition.n_critical_species();
  const auto mc = partition.n_critical_reactions();
  MomentCertificate cert;
  cert.theorem = MomentTheorem::T1;
  if (mc == 0) {
    cert.vacuous = true;
    cert.gamma.assign(nc, Rational(1));
  } else {
    FeasibilitySystem sys(nc);
    for (std::size_t i = 0; i < nc; ++i) sys.add_lower_bound(i, Rational(1));
    for (std::size_t j = 0; j < mc; ++j) {
      RationalVector row(nc);
      for (std::size_t i = 0; i < nc; ++i) row[i] = make_rational(partition.nuc[i][j]);
      sys.add_le(std::move(row), Rational(0));
    }
    auto out = solve(sys);
    if (!out.feasible)
      return CheckFailure{"no gamma >= 1 on the critical species with gamma^T nu^c <= 0", std::move(out.ray),
                          partition.critical_reactions};
    std::vector<std::size_t> all(nc);
    for (std::size_t i = 0; i < nc; ++i) all[i] = i;
    for (auto v : integerize(out.point, all)) cert.gamma.push_back(make_rational(v));
  }
  // Full norm: gamma on critical species plus a boundedness certificate beta
  // covering the non-critical ones. beta vanishes on critical species anyway.
  const auto nu = net.stoichiometry();
  IntVector beta(net.n_species(), 0);
  if (!partition.noncritical_species.empty()) {
    const auto sub = decide_subset_boundedness(nu, partition.noncritical_species);
    if (!sub.certificate) throw std::logic_error("non-critical species lack a joint boundedness certificate");
    beta = sub.certificate->alpha;
  }
  cert.norm_weights = beta;
  for (std::size_t k = 0; k < nc; ++k)
    cert.norm_weights[partition.critical_species[k]] += to_int64(cert.gamma[k]);
  cert.verified = verify_t1(cert, net, partition);
  if (!cert.verified) throw std::logic_error("T1 certificate failed re-verification");
  cert.spot_checks = *spot_check_t1(cert, net, partition);
  return cert;
}

bool verify_t1(const MomentCertificate& cert, const ReactionNetwork& net, const CriticalPartition& partition) {
  const auto nc = partition.n_critical_species();
  if (cert.theorem != MomentTheorem::T1 || cert.gamma.size() != nc) return false;
  for (const auto& g : cert.gamma)
    if (g < 1 || g.get_den() != 1) return false;
  for (std::size_t j = 0; j < partition.n_critical_reactions(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < nc; ++i) s += cert.gamma[i] * partition.nuc[i][j];
    if (s > 0) return false;
  }
  // Full norm: strictly positive, non-increasing under critical jumps, and
  // its non-critical part is non-increasing under every jump.
  const auto& w = cert.norm_weights;
  if (w.size() != net.n_species() || std::any_of(w.begin(), w.end(), [](auto v) { return v < 1; })) return false;
  for (auto j : partition.critical_reactions) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * net.reaction(j).jump[i];
    if (s > 0) return false;
  }
  for (std::size_t j = 0; j < net.n_reactions(); ++j) {
    std::int64_t s = 0;
    for (auto i : partition.noncritical_species) s += w[i] * net.reaction(j).jump[i];
    if (s > 0) return false;
  }
  return spot_check_t1(cert, net, partition).has_value();
}

// ---------------------------------------------------------------------------
// T2

MomentOutcome check_t2(const ReactionNetwork& net) {
  const auto n = net.n_species();
  FeasibilitySystem sys(n);
  for (std::size_t i = 0; i < n; ++i) sys.add_lower_bound(i, Rational(1));
  for (const auto& [m, row] : drift_coefficient_rows(net))
    if (m.total_degree() >= 2) sys.add_le(row, Rational(0));
  std::vector<std::size_t> high;
  for (std::size_t j = 0; j < net.n_reactions(); ++j) {
    if (net.propensity(j).degree() <= 2) continue;
    high.push_back(j);
    sys.add_eq(jump_row(net.reaction(j)), Rational(0));
  }
  auto out = solve(sys);
  if (!out.feasible) {
    std::string reason = "no gamma >= 1 makes every degree >= 2 coefficient of gamma^T F nonpositive";
    if (!high.empty()) reason += " while keeping gamma^T nu_j = 0 for super-quadratic reactions " + describe_reactions(net, high);
    return CheckFailure{std::move(reason), std::move(out.ray), std::move(high)};
  }
  MomentCertificate cert;
  cert.theorem = MomentTheorem::T2;
  cert.gamma = out.point;
  const auto g_f = weighted_drift(net, cert.gamma);
  Rational c = 0;
  for (const auto& [m, coeff] : g_f.terms())
    if (m.total_degree() <= 1) c += abs(coeff);
  cert.C = c > 0 ? c : Rational(1);
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    if (dot(cert.gamma, jump_row(net.reaction(j))) == 0) cert.neutral_reactions.push_back(j);
  cert.verified = verify_t2(cert, net);
  if (!cert.verified) throw std::logic_error("T2 certificate failed re-verification");
  cert.spot_checks = *spot_check_t2(cert, net);
  return cert;
}

bool verify_t2(const MomentCertificate& cert, const ReactionNetwork& net) {
  if (cert.theorem != MomentTheorem::T2 || cert.gamma.size() != net.n_species()) return false;
  for (const auto& g : cert.gamma)
    if (g <= 0) return false;
  if (cert.C <= 0) return false;
  const auto g_f = weighted_drift(net, cert.gamma);
  Rational linear_mass = 0;
  for (const auto& [m, c] : g_f.terms()) {
    if (m.total_degree() >= 2 && c > 0) return false;
    if (m.total_degree() <= 1) linear_mass += abs(c);
  }
  if (cert.C < linear_mass) return false;
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    if (net.propensity(j).degree() > 2 && dot(cert.gamma, jump_row(net.reaction(j))) != 0) return false;
  return spot_check_t2(cert, net).has_value();
}

std::optional<std::size_t> spot_check_t2(const MomentCertificate& cert, const ReactionNetwork& net,
                                               std::size_t count, std::int64_t box) {
  const auto g_f = weighted_drift(net, cert.gamma);
  std::mt19937_64 rng(kSpotCheckSeed);
  for (std::size_t k = 0; k < count; ++k) {
    const auto x = random_point(rng, net.n_species(), box);
    if (g_f.evaluate(x) > cert.C * (one_norm(x) + 1)) return std::nullopt;
  }
  return count;
}

// ---------------------------------------------------------------------------
// T3

BlowupOutcome check_t3(const ReactionNetwork& net, const IntVector& x0) {
  const auto n = net.n_species();
  if (x0.size() != n) throw DimensionMismatch("initial state has wrong length");
  const bool origin_start = std::all_of(x0.begin(), x0.end(), [](auto v) { return v == 0; });
  const IntVector origin(n, 0);
  bool origin_absorbing = true;
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    if (net.propensity(j).evaluate(origin) > 0) origin_absorbing = false;
  if (origin_start && origin_absorbing)
    return CheckFailure{"0 is both the initial and an absorbing state", std::nullopt, {}};

  const auto rows = drift_coefficient_rows(net);
  const auto max_deg = net.max_propensity_degree();
  std::optional<DualRay> last_ray;
  for (std::uint32_t alpha = 2; alpha <= max_deg; ++alpha) {
    FeasibilitySystem sys(n);
    for (std::size_t i = 0; i < n; ++i) sys.add_lower_bound(i, Rational(1));
    for (const auto& [m, row] : rows) sys.add_ge(row, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      RationalVector mass(n, Rational(0));
      for (const auto& [m, row] : rows) {
        if (!m.is_pure_power_of(i) || m[i] < alpha) continue;
        for (std::size_t k = 0; k < n; ++k) mass[k] += row[k];
      }
      sys.add_ge(std::move(mass), Rational(1));
    }
    auto out = solve(sys);
    if (!out.feasible) {
      last_ray = std::move(out.ray);
      continue;
    }
    BlowupCertificate cert;
    cert.gamma = std::move(out.point);
    cert.alpha_exp = alpha;
    cert.C = Rational(1) / power(make_rational(static_cast<std::int64_t>(n)), alpha - 1);
    cert.r_min = max_deg;
    cert.notes = origin_start ? "initial state is 0 but 0 is not absorbing" : "initial state is not 0";
    cert.verified = verify_t3(cert, net, x0);
    if (!cert.verified) throw std::logic_error("T3 certificate failed re-verification");
    cert.spot_checks = *spot_check_t3(cert, net);
    return cert;
  }
  if (max_deg < 2)
    return CheckFailure{"all propensities are at most linear, no exponent alpha_exp >= 2 to scan", std::nullopt, {}};
  return CheckFailure{"no gamma >= 1 makes gamma^T F coefficientwise nonnegative with pure-power mass on every species",
                      std::move(last_ray), {}};
}

bool verify_t3(const BlowupCertificate& cert, const ReactionNetwork& net, const IntVector& x0) {
  const auto n = net.n_species();
  if (cert.gamma.size() != n || cert.alpha_exp < 2) return false;
  for (const auto& g : cert.gamma)
    if (g <= 0) return false;
  if (cert.C <= 0) return false;
  if (cert.r_min != net.max_propensity_degree()) return false;
  const IntVector origin(n, 0);
  if (x0 == origin) {
    bool absorbing = true;
    for (std::size_t j = 0; j < net.n_reactions(); ++j)
      if (net.propensity(j).evaluate(origin) > 0) absorbing = false;
    if (absorbing) return false;
  }
  const auto g_f = weighted_drift(net, cert.gamma);
  // Lattice bound: x_i^b >= x_i^alpha for b >= alpha, and
  // sum_i x_i^alpha >= N^{1-alpha} ||x||_1^alpha.
  const Rational needed = cert.C * power(make_rational(static_cast<std::int64_t>(n)), cert.alpha_exp - 1);
  RationalVector mass(n, Rational(0));
  for (const auto& [m, c] : g_f.terms()) {
    if (c < 0) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (m.is_pure_power_of(i) && m[i] >= cert.alpha_exp) mass[i] += c;
  }
  for (const auto& v : mass)
    if (v < needed) return false;
  return spot_check_t3(cert, net).has_value();
}

std::optional<std::size_t> spot_check_t3(const BlowupCertificate& cert, const ReactionNetwork& net,
                                               std::size_t count, std::int64_t box) {
  const auto g_f = weighted_drift(net, cert.gamma);
  std::mt19937_64 rng(kSpotCheckSeed);
  for (std::size_t k = 0; k < count; ++k) {
    const auto x = random_point(rng, net.n_species(), box);
    if (g_f.evaluate(x) < cert.C * power(one_norm(x), cert.alpha_exp)) return std::nullopt;
  }
  return count;
}

}  // namespace momcert
