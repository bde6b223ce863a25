#include "momcert/boundedness.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "momcert/feasibility.hpp"

namespace momcert {

namespace {

std::size_t n_columns(const IntMatrix& nu) { return nu.empty() ? 0 : nu.front().size(); }

IntVector mat_vec(const IntMatrix& nu, const IntVector& w) {
  IntVector out(nu.size(), 0);
  for (std::size_t i = 0; i < nu.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) out[i] += nu[i][j] * w[j];
  return out;
}

std::int64_t column_dot(const IntMatrix& nu, std::size_t j, const IntVector& alpha) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) s += alpha[i] * nu[i][j];
  return s;
}

// alpha >= 0, alpha_i >= 1 on `covered`, alpha^T nu_j <= 0 for j in `columns`.
FeasibilitySystem alpha_system(const IntMatrix& nu, std::span<const std::size_t> covered,
                               std::span<const std::size_t> columns) {
  FeasibilitySystem sys(nu.size());
  for (auto i : covered) sys.add_lower_bound(i, Rational(1));
  for (auto j : columns) {
    RationalVector row(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) row[i] = make_rational(nu[i][j]);
    sys.add_le(std::move(row), Rational(0));
  }
  return sys;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = k;
  return v;
}

std::optional<BoundednessCertificate> certify(const IntMatrix& nu, std::vector<std::size_t> covered) {
  const auto out = solve(alpha_system(nu, covered, all_indices(n_columns(nu))));
  if (!out.feasible) return std::nullopt;
  BoundednessCertificate cert{integerize(out.point, covered), std::move(covered)};
  if (!verify(cert, nu)) throw std::logic_error("boundedness certificate failed re-verification");
  return cert;
}

IntMatrix select(const IntMatrix& nu, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  IntMatrix out;
  out.reserve(rows.size());
  for (auto i : rows) {
    IntVector r;
    r.reserve(cols.size());
    for (auto j : cols) r.push_back(nu[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

bool verify(const BoundednessCertificate& cert, const IntMatrix& nu) {
  if (cert.alpha.size() != nu.size()) return false;
  if (std::any_of(cert.alpha.begin(), cert.alpha.end(), [](auto a) { return a < 0; })) return false;
  for (auto i : cert.covered)
    if (i >= cert.alpha.size() || cert.alpha[i] < 1) return false;
  for (std::size_t j = 0; j < n_columns(nu); ++j)
    if (column_dot(nu, j, cert.alpha) > 0) return false;
  return true;
}

bool verify(const UnboundednessWitness& wit, const IntMatrix& nu) {
  if (wit.w.size() != n_columns(nu) || wit.species >= nu.size()) return false;
  if (std::any_of(wit.w.begin(), wit.w.end(), [](auto v) { return v < 0; })) return false;
  const auto g = mat_vec(nu, wit.w);
  if (g != wit.growth) return false;
  if (std::any_of(g.begin(), g.end(), [](auto v) { return v < 0; })) return false;
  return g[wit.species] >= 1;
}

SpeciesBoundedness decide_species_boundedness(const IntMatrix& nu, std::size_t species) {
  if (species >= nu.size()) throw std::out_of_range("species index out of range");
  if (auto cert = certify(nu, {species})) return *std::move(cert);
  auto w = alternative_witness(nu, species);
  // Theorem of alternatives: one of the two systems is always solvable.
  if (!w) throw std::logic_error("neither boundedness certificate nor witness exists");
  UnboundednessWitness wit{*w, species, mat_vec(nu, *w)};
  if (!verify(wit, nu)) throw std::logic_error("unboundedness witness failed re-verification");
  return wit;
}

SubsetBoundedness decide_subset_boundedness(const IntMatrix& nu, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  SubsetBoundedness out;
  for (auto i : subset) {
    if (is_bounded(decide_species_boundedness(nu, i))) out.boundable.push_back(i);
    else out.unbounded.push_back(i);
  }
  if (!out.boundable.empty()) out.boundable_certificate = certify(nu, out.boundable);
  if (out.unbounded.empty()) out.certificate = out.boundable_certificate;
  return out;
}

CriticalPartition classify(const ReactionNetwork& net) {
  const auto nu = net.stoichiometry();
  const auto n = net.n_species();
  const auto m = net.n_reactions();
  CriticalPartition p;
  for (std::size_t i = 0; i < n; ++i) {
    p.species_outcomes.push_back(decide_species_boundedness(nu, i));
    (is_bounded(p.species_outcomes.back()) ? p.noncritical_species : p.critical_species).push_back(i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto& a = net.propensity(j);
    if (a.has_negative_coefficient()) p.sign_mixed = true;
    // Canonical form has no cancellation left, so the degree of the
    // absolute-coefficient polynomial equals this one.
    (max_degree_in(a, p.critical_species) >= 2 ? p.critical_reactions : p.noncritical_reactions).push_back(j);
  }
  p.species_order = p.critical_species;
  p.species_order.insert(p.species_order.end(), p.noncritical_species.begin(), p.noncritical_species.end());
  p.reaction_order = p.critical_reactions;
  p.reaction_order.insert(p.reaction_order.end(), p.noncritical_reactions.begin(), p.noncritical_reactions.end());
  p.species_position.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) p.species_position[p.species_order[k]] = k;
  p.reaction_position.assign(m, 0);
  for (std::size_t k = 0; k < m; ++k) p.reaction_position[p.reaction_order[k]] = k;
  const auto cols = all_indices(m);
  p.nu1 = select(nu, p.critical_species, cols);
  p.nu2 = select(nu, p.noncritical_species, cols);
  p.nuc = select(nu, p.critical_species, p.critical_reactions);
  return p;
}

std::optional<IntVector> construct_monotone_norm(const IntMatrix& nu, std::span<const std::size_t> reactions) {
  const auto everyone = all_indices(nu.size());
  const auto out = solve(alpha_system(nu, everyone, reactions));
  if (!out.feasible) return std::nullopt;
  auto alpha = integerize(out.point, everyone);
  if (!verify_monotone_norm(nu, reactions, alpha)) throw std::logic_error("monotone norm failed re-verification");
  return alpha;
}

bool verify_monotone_norm(const IntMatrix& nu, std::span<const std::size_t> reactions, const IntVector& alpha) {
  if (alpha.size() != nu.size()) return false;
  if (std::any_of(alpha.begin(), alpha.end(), [](auto a) { return a < 1; })) return false;
  return std::all_of(reactions.begin(), reactions.end(),
                     [&](std::size_t j) { return column_dot(nu, j, alpha) <= 0; });
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> AccessibleSetSample::path_to(std::size_t k) const {
  std::vector<std::size_t> path;
  while (k != 0) {
    path.push_back(via_reaction[k]);
    k = parent[k];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::size_t> AccessibleSetSample::find(const IntVector& x) const {
  auto it = std::find(states.begin(), states.end(), x);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

AccessibleSetSample explore_accessible(const ReactionNetwork& net, const IntVector& x0,
                                       const ExplorationCaps& caps) {
  if (x0.size() != net.n_species()) throw DimensionMismatch("initial state has wrong length");
  AccessibleSetSample s;
  std::map<IntVector, std::size_t> index;
  s.states.push_back(x0);
  s.parent.push_back(0);
  s.via_reaction.push_back(0);
  index.emplace(x0, 0);
  std::size_t head = 0;
  while (head < s.states.size()) {
    const std::size_t cur = head++;
    for (std::size_t j = 0; j < net.n_reactions(); ++j) {
      const IntVector& x = s.states[cur];
      if (net.propensity(j).evaluate(x) <= 0) continue;
      IntVector y = x;
      bool in_cap = true;
      for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += net.reaction(j).jump[i];
        if (y[i] < 0) throw std::logic_error("improper propensity fired out of the lattice");
        if (y[i] > caps.max_coord) in_cap = false;
      }
      if (!in_cap) {
        s.cap_hit = true;
        continue;
      }
      if (index.contains(y)) continue;
      if (s.states.size() >= caps.max_states) {
        s.cap_hit = true;
        return s;
      }
      index.emplace(y, s.states.size());
      s.states.push_back(std::move(y));
      s.parent.push_back(cur);
      s.via_reaction.push_back(j);
    }
  }
  s.frontier_exhausted = !s.cap_hit;
  return s;
}

UnboundednessThreshold unboundedness_threshold(const IntMatrix& nu, const IntVector& w) {
  const auto n = nu.size();
  const auto m = n_columns(nu);
  if (w.size() != m) throw DimensionMismatch("witness has wrong length");
  UnboundednessThreshold t;
  t.xbar.assign(n, 0);
  IntVector u(m, 0), state(n, 0);
  t.sequence.partial_sums.push_back(u);
  for (std::size_t j = 0; j < m; ++j) {
    if (w[j] < 0) throw std::invalid_argument("witness must be nonnegative");
    for (std::int64_t k = 0; k < w[j]; ++k) {
      t.sequence.firings.push_back(j);
      ++u[j];
      t.sequence.partial_sums.push_back(u);
      for (std::size_t i = 0; i < n; ++i) {
        state[i] += nu[i][j];
        t.xbar[i] = std::max(t.xbar[i], -state[i]);
      }
    }
  }
  return t;
}

}  // namespace momcert
