#include <algorithm>
#include <cmath>
#include <boost/numeric/odeint.hpp>

#include "momcert/simulation.hpp"

namespace momcert {

namespace {

constexpr std::size_t kMaxBoxStates = 2'000'000;

struct Transition {
  std::size_t from;
  std::size_t to;  // == n_states means leak
  double rate;
};

}  // namespace

double TruncatedDistribution::mass_in_box() const {
  double s = 0;
  for (double p : probability) s += p;
  return s;
}

double TruncatedDistribution::probability_of(const IntVector& x) const {
  if (x.size() != box.size()) throw DimensionMismatch("state has wrong length");
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] > box[i]) return 0.0;
    idx += static_cast<std::size_t>(x[i]) * stride;
    stride *= static_cast<std::size_t>(box[i] + 1);
  }
  return probability[idx];
}

double TruncatedDistribution::moment(unsigned r, const std::vector<double>& w) const {
  if (!w.empty() && w.size() != box.size()) throw DimensionMismatch("norm weights have wrong length");
  double s = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    double norm = 0;
    for (std::size_t i = 0; i < box.size(); ++i) norm += (w.empty() ? 1.0 : w[i]) * static_cast<double>(states[k][i]);
    s += std::pow(norm, static_cast<double>(r)) * probability[k];
  }
  return s;
}

TruncatedDistribution integrate_forward_equations(const ReactionNetwork& net, const IntVector& x0, double t_end,
                                                  const IntVector& box, const ForwardOptions& options) {
  const auto n = net.n_species();
  if (x0.size() != n || box.size() != n) throw DimensionMismatch("state or box has wrong length");
  if (!(t_end >= 0)) throw std::invalid_argument("t_end must be nonnegative");
  std::size_t n_states = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (box[i] < 0) throw std::invalid_argument("box bounds must be nonnegative");
    if (x0[i] < 0 || x0[i] > box[i]) throw std::invalid_argument("box does not contain the initial state");
    n_states *= static_cast<std::size_t>(box[i] + 1);
    if (n_states > kMaxBoxStates) throw std::invalid_argument("box has too many states");
  }

  TruncatedDistribution dist;
  dist.box = box;
  dist.states.reserve(n_states);
  std::vector<Transition> transitions;
  std::vector<double> exit_rate(n_states, 0.0);
  IntVector x(n, 0);
  std::size_t x0_index = 0;
  for (std::size_t k = 0; k < n_states; ++k) {
    if (x == x0) x0_index = k;
    dist.states.push_back(x);
    for (std::size_t j = 0; j < net.n_reactions(); ++j) {
      const double a = net.propensity(j).evaluate(x).get_d();
      if (a < 0) throw std::invalid_argument("negative propensity inside the box");
      if (a == 0) continue;
      exit_rate[k] += a;
      std::size_t to = 0, stride = 1;
      bool inside = true;
      for (std::size_t i = 0; i < n; ++i) {
        const auto yi = x[i] + net.reaction(j).jump[i];
        if (yi < 0 || yi > box[i]) {
          inside = false;
          break;
        }
        to += static_cast<std::size_t>(yi) * stride;
        stride *= static_cast<std::size_t>(box[i] + 1);
      }
      transitions.push_back({k, inside ? to : n_states, a});
    }
    // Mixed-radix increment, species 0 fastest.
    for (std::size_t i = 0; i < n; ++i) {
      if (++x[i] <= box[i]) break;
      x[i] = 0;
    }
  }

  using State = std::vector<double>;
  State p(n_states + 1, 0.0);
  p[x0_index] = 1.0;
  auto rhs = [&](const State& y, State& dy, double) {
    for (std::size_t k = 0; k < n_states; ++k) dy[k] = -exit_rate[k] * y[k];
    dy[n_states] = 0.0;
    for (const auto& tr : transitions) dy[tr.to] += tr.rate * y[tr.from];
  };
  if (t_end > 0) {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, p, 0.0, t_end, std::min(1e-3, t_end));
  }
  dist.leaked = p[n_states];
  p.pop_back();
  dist.probability = std::move(p);
  dist.time = t_end;
  dist.box_too_small = dist.leaked > 0.5;
  return dist;
}

}  // namespace momcert
