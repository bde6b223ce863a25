#include "momcert/network.hpp"

#include <algorithm>
#include <set>

namespace momcert {

namespace {

constexpr std::size_t kMaxViolationsKept = 8;
constexpr std::uint64_t kMaxBoxPoints = 4'000'000;

// Variables that appear in p with a nonzero exponent.
std::vector<std::size_t> active_variables(const Polynomial& p) {
  std::set<std::size_t> vars;
  for (const auto& [m, c] : p.terms())
    for (std::size_t i = 0; i < m.nvars(); ++i)
      if (m[i] > 0) vars.insert(i);
  return {vars.begin(), vars.end()};
}

// Odometer over x[v] in {lo[v]..hi[v]} for v in vars; other coordinates keep
// their value. Calls visit(x) until it returns false. Returns false if the box
// holds more than kMaxBoxPoints points (nothing visited).
template <typename Visit>
bool for_each_in_box(IntVector x, const std::vector<std::size_t>& vars, const IntVector& lo,
                     const IntVector& hi, Visit&& visit) {
  std::uint64_t count = 1;
  for (auto v : vars) {
    count *= static_cast<std::uint64_t>(hi[v] - lo[v] + 1);
    if (count > kMaxBoxPoints) return false;
  }
  for (auto v : vars) x[v] = lo[v];
  for (;;) {
    if (!visit(static_cast<const IntVector&>(x))) return true;
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      const auto v = vars[k];
      if (x[v] < hi[v]) {
        ++x[v];
        break;
      }
      x[v] = lo[v];
    }
    if (k == vars.size()) return true;
  }
}

bool lattice_feasible(const IntVector& x, const IntVector& jump) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] + jump[i] < 0) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

ReactionNetwork::ReactionNetwork(std::vector<std::string> species_names)
    : species_(std::move(species_names)) {
  if (species_.empty()) throw std::invalid_argument("network needs at least one species");
}

void ReactionNetwork::add_reaction(Reaction reaction) {
  if (reaction.jump.size() != n_species())
    throw DimensionMismatch("reaction '" + reaction.name + "' jump has wrong length");
  if (reaction.propensity.nvars() != n_species())
    throw DimensionMismatch("reaction '" + reaction.name + "' propensity has wrong dimension");
  reactions_.push_back(std::move(reaction));
}

void ReactionNetwork::add_mass_action(std::string name, const IntVector& reactants,
                                      const IntVector& products, const Rational& rate) {
  if (reactants.size() != n_species() || products.size() != n_species())
    throw DimensionMismatch("reaction '" + name + "' has wrong species count");
  auto built = build_mass_action(reactants, products, rate);
  add_reaction(Reaction{std::move(name), std::move(built.jump), std::move(built.propensity),
                        MassAction{rate, reactants}});
}

void ReactionNetwork::add_polynomial(std::string name, IntVector jump, Polynomial propensity) {
  add_reaction(Reaction{std::move(name), std::move(jump), std::move(propensity), std::nullopt});
}

IntMatrix ReactionNetwork::stoichiometry() const {
  IntMatrix nu(n_species(), IntVector(n_reactions(), 0));
  for (std::size_t j = 0; j < n_reactions(); ++j)
    for (std::size_t i = 0; i < n_species(); ++i) nu[i][j] = reactions_[j].jump[i];
  return nu;
}

std::uint32_t ReactionNetwork::max_propensity_degree() const {
  std::uint32_t d = 0;
  for (const auto& r : reactions_) d = std::max(d, r.propensity.degree());
  return d;
}

void ReactionNetwork::set_initial_state(IntVector x0) {
  if (x0.size() != n_species()) throw DimensionMismatch("initial state has wrong length");
  if (std::any_of(x0.begin(), x0.end(), [](auto v) { return v < 0; }))
    throw std::invalid_argument("initial state must be nonnegative");
  init_ = std::move(x0);
}

// ---------------------------------------------------------------------------

MassActionReaction build_mass_action(const IntVector& reactants, const IntVector& products,
                                     const Rational& rate) {
  if (reactants.size() != products.size()) throw DimensionMismatch("reactant/product length mismatch");
  if (rate <= 0) throw std::invalid_argument("mass-action rate must be positive");
  const auto n = reactants.size();
  MassActionReaction r{IntVector(n), Polynomial::constant(n, rate)};
  for (std::size_t i = 0; i < n; ++i) {
    if (reactants[i] < 0 || products[i] < 0)
      throw std::invalid_argument("reactant and product multiplicities must be nonnegative");
    r.jump[i] = products[i] - reactants[i];
    if (reactants[i] > 0)
      r.propensity = r.propensity *
                     Polynomial::falling_factorial(n, i, static_cast<std::uint32_t>(reactants[i]));
  }
  return r;
}

std::vector<ProperVerdict> validate_properness(const ReactionNetwork& net) {
  const auto n = net.n_species();
  std::vector<ProperVerdict> out;
  out.reserve(net.n_reactions());
  for (const auto& r : net.reactions()) {
    ProperVerdict v;
    for (std::size_t i = 0; i < n && v.proper; ++i) {
      if (r.jump[i] >= 0) continue;
      const auto order = static_cast<std::uint32_t>(-r.jump[i]);
      if (divisible_by_falling_factorial(r.propensity, i, order)) continue;
      v.proper = false;
      v.species = i;
      // Some hyperplane x_i = k, k < order, carries a nonzero restriction; a
      // nonzero polynomial of degree d cannot vanish on all of {0..d}^n.
      auto vars = active_variables(r.propensity);
      std::erase(vars, i);
      const auto d = static_cast<std::int64_t>(std::max<std::uint32_t>(r.propensity.degree(), 1));
      for (std::uint32_t k = 0; k < order && !v.witness; ++k) {
        IntVector x(n, 0), lo(n, 0), hi(n, d);
        x[i] = k;
        for_each_in_box(x, vars, lo, hi, [&](const IntVector& p) {
          if (r.propensity.evaluate(p) != 0) {
            v.witness = p;
            return false;
          }
          return true;
        });
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

bool all_proper(const std::vector<ProperVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.proper; });
}

std::string_view to_string(RegularityStatus s) {
  switch (s) {
    case RegularityStatus::Analytic: return "REGULAR (analytic)";
    case RegularityStatus::RegularOnBox: return "REGULAR-ON-BOX";
    case RegularityStatus::Violation: return "VIOLATION";
    case RegularityStatus::Unchecked: return "UNCHECKED";
  }
  return "?";
}

std::vector<RegularityVerdict> check_regularity(const ReactionNetwork& net, std::int64_t box) {
  const auto n = net.n_species();
  std::vector<RegularityVerdict> out;
  for (const auto& r : net.reactions()) {
    RegularityVerdict v;
    if (r.mass_action) {
      bool exact = true;
      for (std::size_t i = 0; i < n; ++i)
        if (r.mass_action->reactants[i] != std::max<std::int64_t>(0, -r.jump[i])) exact = false;
      if (exact) {
        v.status = RegularityStatus::Analytic;
        out.push_back(std::move(v));
        continue;
      }
    }
    // Coordinates outside the propensity's support with nu_ij >= 0 affect
    // neither a_j(x) nor lattice feasibility, so they stay at 0.
    auto vars = active_variables(r.propensity);
    for (std::size_t i = 0; i < n; ++i)
      if (r.jump[i] < 0 && std::find(vars.begin(), vars.end(), i) == vars.end()) vars.push_back(i);
    std::sort(vars.begin(), vars.end());
    IntVector lo(n, 0), hi(n, box);
    const bool done = for_each_in_box(IntVector(n, 0), vars, lo, hi, [&](const IntVector& x) {
      if (lattice_feasible(x, r.jump) && r.propensity.evaluate(x) <= 0) {
        v.violations.push_back(x);
        if (v.violations.size() >= kMaxViolationsKept) return false;
      }
      return true;
    });
    if (!done) v.status = RegularityStatus::Unchecked;
    else v.status = v.violations.empty() ? RegularityStatus::RegularOnBox : RegularityStatus::Violation;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<NonnegativityVerdict> check_nonnegativity(const ReactionNetwork& net, std::int64_t box) {
  const auto n = net.n_species();
  std::vector<NonnegativityVerdict> out;
  for (const auto& r : net.reactions()) {
    NonnegativityVerdict v;
    if (!r.mass_action && r.propensity.has_negative_coefficient()) {
      IntVector lo(n, 0), hi(n, box);
      v.checked = for_each_in_box(IntVector(n, 0), active_variables(r.propensity), lo, hi,
                                  [&](const IntVector& x) {
                                    if (r.propensity.evaluate(x) < 0) {
                                      v.nonnegative_on_box = false;
                                      v.witness = x;
                                      return false;
                                    }
                                    return true;
                                  });
    }
    out.push_back(std::move(v));
  }
  return out;
}

RationalVector DriftVector::evaluate(std::span<const std::int64_t> x) const {
  RationalVector v;
  v.reserve(components.size());
  for (const auto& c : components) v.push_back(c.evaluate(x));
  return v;
}

DriftVector drift(const ReactionNetwork& net) {
  const auto n = net.n_species();
  DriftVector f{std::vector<Polynomial>(n, Polynomial(n))};
  for (const auto& r : net.reactions())
    for (std::size_t i = 0; i < n; ++i)
      if (r.jump[i] != 0) f.components[i] += r.propensity * make_rational(r.jump[i]);
  return f;
}

Polynomial weighted_drift(const ReactionNetwork& net, const RationalVector& gamma) {
  if (gamma.size() != net.n_species()) throw DimensionMismatch("gamma has wrong length");
  if (std::any_of(gamma.begin(), gamma.end(), [](const Rational& g) { return g <= 0; }))
    throw std::invalid_argument("gamma must be strictly positive");
  const auto f = drift(net);
  Polynomial out(net.n_species());
  for (std::size_t i = 0; i < gamma.size(); ++i) out += f.components[i] * gamma[i];
  return out;
}

}  // namespace momcert
