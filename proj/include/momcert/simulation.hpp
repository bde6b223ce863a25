#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "momcert/network.hpp"

namespace momcert {

// ---------------------------------------------------------------------------
// Random numbers

/// Counter-based generator: output k is a SplitMix64 finalizer applied to
/// key + k * golden-ratio increment. Streams with different keys are
/// independent for practical purposes, and a stream is a pure function of its key.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform on (0, 1], 53-bit resolution.
  double uniform_open0();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);
/// Per-trajectory seed derived from (master seed, trajectory index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// ---------------------------------------------------------------------------
// Gillespie direct method

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, IntVector state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const IntVector& state() const { return state_; }

 private:
  IntVector state_;
};

enum class TrajectoryStatus { Absorbed, TimeReached, Censored };
std::string to_string(TrajectoryStatus s);

struct SimulationOptions {
  double t_end = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t event_cap = 1'000'000;
  std::vector<double> grid;  // ascending, within [0, t_end]
  bool record_path = false;
  bool exact_propensities = false;  // evaluate a_j in exact rationals
};

struct Trajectory {
  // Filled when record_path: states[0] = x0 at time 0, then post-jump states.
  std::vector<double> jump_times;
  std::vector<IntVector> states;
  // State and per-reaction event counts R_j(t) at grid times. Only the first
  // n_observed grid times are observed; later ones lie past censoring.
  std::vector<IntVector> grid_states;
  std::vector<IntVector> grid_counts;
  std::size_t n_observed = 0;
  TrajectoryStatus status = TrajectoryStatus::TimeReached;
  std::uint64_t n_events = 0;
  double censor_time = std::numeric_limits<double>::infinity();
  IntVector final_state;
};

/// Throws SimulationError on a negative propensity, std::invalid_argument on
/// bad options.
Trajectory simulate(const ReactionNetwork& net, const IntVector& x0, const SimulationOptions& options);

// ---------------------------------------------------------------------------
// Ensemble moments

struct EnsembleOptions {
  std::vector<double> grid;
  std::vector<unsigned> orders{1};
  std::size_t n_traj = 1000;
  std::uint64_t master_seed = 0;
  std::uint64_t event_cap = 1'000'000;
  std::vector<double> norm_weights;  // empty: plain 1-norm
  unsigned threads = 0;              // 0: hardware concurrency
};

struct MomentEstimate {
  double t = 0;
  unsigned r = 1;
  double mean = 0;
  double std_error = 0;
  std::size_t n_effective = 0;
  double censored_frac = 0;
  /// NaN fields (no observed trajectory) compare equal to each other.
  bool operator==(const MomentEstimate& o) const;
};

/// Sample moments of ||X(t)||^r over trajectories not yet censored at t.
/// Whenever censored_frac > 0 the estimate is biased low.
struct EnsembleStats {
  std::vector<double> grid;
  std::vector<unsigned> orders;
  std::vector<MomentEstimate> rows;  // grid-major, then order
  std::size_t n_traj = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t event_cap = 0;
  std::size_t n_absorbed = 0, n_time_reached = 0, n_censored = 0;
  std::string norm = "1-norm";

  bool operator==(const EnsembleStats&) const = default;

  const MomentEstimate& at(std::size_t grid_index, std::size_t order_index) const {
    return rows.at(grid_index * orders.size() + order_index);
  }
  /// Columns t,r,mean,stderr,n_effective,censored_frac.
  std::string to_csv() const;
};

/// Trajectory k uses derive_seed(master_seed, k); results are reduced in
/// trajectory order, so any thread schedule gives identical statistics.
EnsembleStats estimate_moments(const ReactionNetwork& net, const IntVector& x0, const EnsembleOptions& options);

// ---------------------------------------------------------------------------
// Truncated forward (master) equation

struct TruncatedDistribution {
  IntVector box;  // per-species upper bound, lower bound 0
  std::vector<IntVector> states;
  std::vector<double> probability;
  double leaked = 0;  // mass that flowed out of the box
  double time = 0;
  bool box_too_small = false;  // leaked > 0.5

  double mass_in_box() const;
  double probability_of(const IntVector& x) const;
  /// sum_x ||x||^r p(x) over the box; a lower bound whenever leaked > 0.
  double moment(unsigned r, const std::vector<double>& norm_weights = {}) const;
};

struct ForwardOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
};

/// Integrates dp/dt = sum_j [a_j(x - nu_j) p(x - nu_j) - a_j(x) p(x)] on the
/// box with an adaptive Dormand-Prince stepper; out-of-box flow is kept as an
/// extra leak state. Throws std::invalid_argument if the box misses x0.
TruncatedDistribution integrate_forward_equations(const ReactionNetwork& net, const IntVector& x0, double t_end,
                                                  const IntVector& box, const ForwardOptions& options = {});

}  // namespace momcert
