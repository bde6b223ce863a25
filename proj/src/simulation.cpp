#include "momcert/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace momcert {

// ---------------------------------------------------------------------------
// Random numbers

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform_open0() {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Propensity evaluation

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

// Double evaluation of a polynomial at integer points. Falls back to exact
// rational evaluation when any partial value leaves the range where doubles
// hold integers exactly.
class CompiledPropensity {
 public:
  explicit CompiledPropensity(const Polynomial& p) : exact_(&p) {
    for (const auto& [m, c] : p.terms()) {
      Term t{c.get_d(), {}};
      for (std::size_t i = 0; i < m.nvars(); ++i)
        if (m[i] > 0) t.factors.emplace_back(i, m[i]);
      terms_.push_back(std::move(t));
    }
  }

  double operator()(const IntVector& x, bool exact) const {
    if (exact) return exact_->evaluate(x).get_d();
    double sum = 0;
    for (const auto& t : terms_) {
      double v = t.coef;
      for (const auto& [i, e] : t.factors) {
        const double xi = static_cast<double>(x[i]);
        for (std::uint32_t k = 0; k < e; ++k) v *= xi;
      }
      if (std::abs(v) >= kExactLimit) return exact_->evaluate(x).get_d();
      sum += v;
    }
    if (std::abs(sum) >= kExactLimit) return exact_->evaluate(x).get_d();
    return sum;
  }

 private:
  struct Term {
    double coef;
    std::vector<std::pair<std::size_t, std::uint32_t>> factors;
  };
  const Polynomial* exact_;
  std::vector<Term> terms_;
};

}  // namespace

std::string to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Absorbed: return "ABSORBED";
    case TrajectoryStatus::TimeReached: return "TIME_REACHED";
    case TrajectoryStatus::Censored: return "CENSORED";
  }
  return "?";
}

Trajectory simulate(const ReactionNetwork& net, const IntVector& x0, const SimulationOptions& opt) {
  const auto n = net.n_species();
  const auto m = net.n_reactions();
  if (x0.size() != n) throw DimensionMismatch("initial state has wrong length");
  if (std::any_of(x0.begin(), x0.end(), [](auto v) { return v < 0; }))
    throw std::invalid_argument("initial state must be nonnegative");
  if (opt.event_cap < 1) throw std::invalid_argument("event cap must be at least 1");
  if (!(opt.t_end >= 0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!std::is_sorted(opt.grid.begin(), opt.grid.end()) ||
      (!opt.grid.empty() && (opt.grid.front() < 0 || opt.grid.back() > opt.t_end)))
    throw std::invalid_argument("grid must be ascending within [0, t_end]");

  std::vector<CompiledPropensity> props;
  props.reserve(m);
  for (std::size_t j = 0; j < m; ++j) props.emplace_back(net.propensity(j));

  Trajectory tr;
  CounterRng rng(opt.seed);
  IntVector x = x0;
  IntVector counts(m, 0);
  std::vector<double> a(m, 0.0);
  double t = 0;
  std::size_t next_grid = 0;
  auto record_grid_until = [&](double limit, bool inclusive) {
    while (next_grid < opt.grid.size() && (inclusive ? opt.grid[next_grid] <= limit : opt.grid[next_grid] < limit)) {
      tr.grid_states.push_back(x);
      tr.grid_counts.push_back(counts);
      ++next_grid;
    }
  };
  if (opt.record_path) {
    tr.jump_times.push_back(0.0);
    tr.states.push_back(x);
  }

  for (;;) {
    double a0 = 0;
    for (std::size_t j = 0; j < m; ++j) {
      a[j] = props[j](x, opt.exact_propensities);
      if (a[j] < 0) {
        std::ostringstream msg;
        msg << "negative propensity for reaction '" << net.reaction(j).name << "' at state (";
        for (std::size_t i = 0; i < n; ++i) msg << (i ? "," : "") << x[i];
        msg << ")";
        throw SimulationError(msg.str(), x);
      }
      a0 += a[j];
    }
    if (a0 == 0) {
      record_grid_until(opt.t_end, true);
      tr.status = TrajectoryStatus::Absorbed;
      break;
    }
    const double t_next = t - std::log(rng.uniform_open0()) / a0;
    if (t_next > opt.t_end) {
      record_grid_until(opt.t_end, true);
      tr.status = TrajectoryStatus::TimeReached;
      break;
    }
    record_grid_until(t_next, false);
    if (tr.n_events >= opt.event_cap) {
      // The state is known up to the next jump, which is never executed.
      tr.status = TrajectoryStatus::Censored;
      tr.censor_time = t_next;
      break;
    }
    const double target = rng.uniform_open0() * a0;
    double cum = 0;
    std::size_t chosen = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (a[j] <= 0) continue;
      cum += a[j];
      chosen = j;
      if (cum >= target) break;
    }
    const auto& jump = net.reaction(chosen).jump;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += jump[i];
      if (x[i] < 0) throw SimulationError("state left the nonnegative lattice (improper propensity)", x);
    }
    ++counts[chosen];
    ++tr.n_events;
    t = t_next;
    if (opt.record_path) {
      tr.jump_times.push_back(t);
      tr.states.push_back(x);
    }
  }
  tr.n_observed = tr.grid_states.size();
  tr.final_state = x;
  return tr;
}

// ---------------------------------------------------------------------------
// Ensemble

namespace {
bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }
}  // namespace

bool MomentEstimate::operator==(const MomentEstimate& o) const {
  return t == o.t && r == o.r && same(mean, o.mean) && same(std_error, o.std_error) &&
         n_effective == o.n_effective && censored_frac == o.censored_frac;
}

std::string EnsembleStats::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "t,r,mean,stderr,n_effective,censored_frac\n";
  for (const auto& row : rows)
    out << row.t << ',' << row.r << ',' << row.mean << ',' << row.std_error << ',' << row.n_effective << ','
        << row.censored_frac << '\n';
  return out.str();
}

EnsembleStats estimate_moments(const ReactionNetwork& net, const IntVector& x0, const EnsembleOptions& opt) {
  if (opt.n_traj < 2) throw std::invalid_argument("ensemble needs at least 2 trajectories");
  if (opt.grid.empty()) throw std::invalid_argument("ensemble needs a nonempty time grid");
  if (!opt.norm_weights.empty() && opt.norm_weights.size() != net.n_species())
    throw DimensionMismatch("norm weights have wrong length");
  const auto n_grid = opt.grid.size();

  // norms[k * n_grid + g]; observed[k] grid points seen by trajectory k.
  std::vector<double> norms(opt.n_traj * n_grid, 0.0);
  std::vector<std::size_t> observed(opt.n_traj, 0);
  std::vector<TrajectoryStatus> status(opt.n_traj);

  SimulationOptions sim;
  sim.t_end = opt.grid.back();
  sim.event_cap = opt.event_cap;
  sim.grid = opt.grid;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    SimulationOptions local = sim;
    for (std::size_t k = next++; k < opt.n_traj && !failed; k = next++) {
      try {
        local.seed = derive_seed(opt.master_seed, k);
        const auto tr = simulate(net, x0, local);
        observed[k] = tr.n_observed;
        status[k] = tr.status;
        for (std::size_t g = 0; g < tr.n_observed; ++g) {
          double v = 0;
          for (std::size_t i = 0; i < x0.size(); ++i)
            v += (opt.norm_weights.empty() ? 1.0 : opt.norm_weights[i]) * static_cast<double>(tr.grid_states[g][i]);
          norms[k * n_grid + g] = v;
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  unsigned n_threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, opt.n_traj));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleStats stats;
  stats.grid = opt.grid;
  stats.orders = opt.orders;
  stats.n_traj = opt.n_traj;
  stats.master_seed = opt.master_seed;
  stats.event_cap = opt.event_cap;
  if (!opt.norm_weights.empty()) stats.norm = "weighted 1-norm";
  for (auto s : status) {
    if (s == TrajectoryStatus::Absorbed) ++stats.n_absorbed;
    else if (s == TrajectoryStatus::Censored) ++stats.n_censored;
    else ++stats.n_time_reached;
  }
  for (std::size_t g = 0; g < n_grid; ++g) {
    for (auto r : opt.orders) {
      MomentEstimate est;
      est.t = opt.grid[g];
      est.r = r;
      // Two passes in trajectory order keep the result schedule-independent.
      double sum = 0;
      std::size_t count = 0;
      for (std::size_t k = 0; k < opt.n_traj; ++k) {
        if (g >= observed[k]) continue;
        sum += std::pow(norms[k * n_grid + g], static_cast<double>(r));
        ++count;
      }
      est.n_effective = count;
      est.censored_frac = static_cast<double>(opt.n_traj - count) / static_cast<double>(opt.n_traj);
      if (count == 0) {
        est.mean = std::numeric_limits<double>::quiet_NaN();
        est.std_error = std::numeric_limits<double>::quiet_NaN();
      } else {
        est.mean = sum / static_cast<double>(count);
        double ss = 0;
        for (std::size_t k = 0; k < opt.n_traj; ++k) {
          if (g >= observed[k]) continue;
          const double d = std::pow(norms[k * n_grid + g], static_cast<double>(r)) - est.mean;
          ss += d * d;
        }
        est.std_error = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count))
                                  : std::numeric_limits<double>::quiet_NaN();
      }
      stats.rows.push_back(est);
    }
  }
  return stats;
}

}  // namespace momcert
