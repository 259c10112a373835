#pragma once

// Monte Carlo runner: correlated pairs (x, x shifted), failure counts with
// Wilson intervals, log-log slope fits, CSV/JSON emission and named presets.

#include <omp.h>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lphs/rand_oracle.hpp"

namespace lphs {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion (99% by default).
Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z = kZ99);

struct FitPoint {
  double d = 0;
  double delta = 0;
  double weight = 1;
};

struct SlopeFit {
  double slope = 0;
  double stderr_ = 0;
  double intercept = 0;
  int points_used = 0;
  std::vector<std::string> warnings;
};

/// Weighted least squares of log(delta) on log(d). Points with delta = 0 are dropped with a warning
/// that quotes the rule-of-three bound. Throws when fewer than 4 points remain.
SlopeFit fit_slope(const std::vector<FitPoint>& points, std::optional<std::uint64_t> trials_for_warning = {});

/// Trial-parallel failure count. fn(t) returns true on failure; the sum does not depend on the thread count.
template <class Fn>
std::uint64_t count_trials(std::uint64_t trials, int threads, const Fn& fn) {
  std::uint64_t failures = 0;
  if (threads <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) failures += fn(t) ? 1 : 0;
    return failures;
  }
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 64) reduction(+ : failures)
  for (std::int64_t t = 0; t < n; ++t) failures += fn(static_cast<std::uint64_t>(t)) ? 1 : 0;
  return failures;
}

/// Several counters per trial (e.g. failures, bots); element-wise sums.
template <std::size_t K, class Fn>
std::array<std::uint64_t, K> count_trials_multi(std::uint64_t trials, int threads, const Fn& fn) {
  std::array<std::uint64_t, K> total{};
  const auto n = static_cast<std::int64_t>(trials);
  if (threads <= 1) {
    for (std::int64_t t = 0; t < n; ++t) {
      const auto c = fn(static_cast<std::uint64_t>(t));
      for (std::size_t k = 0; k < K; ++k) total[k] += c[k];
    }
    return total;
  }
#pragma omp parallel num_threads(threads)
  {
    std::array<std::uint64_t, K> local{};
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t t = 0; t < n; ++t) {
      const auto c = fn(static_cast<std::uint64_t>(t));
      for (std::size_t k = 0; k < K; ++k) local[k] += c[k];
    }
#pragma omp critical
    for (std::size_t k = 0; k < K; ++k) total[k] += local[k];
  }
  return total;
}

/// Worker count from LPHS_THREADS, else the OpenMP default.
int default_threads();

enum class Algo {
  basic,
  irw,
  rw,
  cyclic_rw,
  las_vegas,
  ddl_basic,
  ddl_irw,
  minhash2d,
  recursive2d,
  threestage2d,
  rwhash2d,
  kd_threestage2d,
};

std::string to_string(Algo a);
Algo parse_algo(const std::string& s);
bool is_2d(Algo a);
std::vector<std::string> algo_names();

struct Shift {
  std::int64_t r1 = 1;
  std::int64_t r2 = 0;
  std::string label(bool two_d) const;
  friend bool operator==(const Shift&, const Shift&) = default;
};

struct GridPoint {
  std::int64_t d = 0;
  std::int64_t n = 0;    // 0: the algorithm's default for d
  int b = 0;             // 0: default_symbol_bits of the input size
  Mode mode = Mode::cyclic;
  std::int64_t param = 0;  // rw: L; cyclic_rw: rounds; las_vegas: R
  std::vector<Shift> shifts{Shift{}};
};

/// String length used when a grid point leaves n at 0.
std::int64_t default_length(Algo a, std::int64_t d);

struct ExperimentSpec {
  Algo algo = Algo::basic;
  std::vector<GridPoint> points;
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 1;
  int threads = 1;
};

struct Row {
  std::string algo;
  std::int64_t d = 0;
  std::int64_t n = 0;
  int b = 0;
  std::string shift;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::uint64_t bots = 0;  // las_vegas only: evaluations that returned bot, two per trial
  double delta_hat = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  std::optional<std::string> error;
};

struct TrialReport {
  std::vector<Row> rows;
  std::optional<SlopeFit> slope;
  double seconds = 0;
  bool has_errors() const;
};

/// Trial seed for (master, point, shift, trial).
Seed trial_seed(std::uint64_t master, std::size_t point, std::size_t shift, std::uint64_t trial);

/// One failure indicator for algorithm a at grid point p, shift s, trial seed ts. bot_evals receives the number
/// of sides that returned bot.
bool run_trial(Algo a, const GridPoint& p, const Shift& s, const Seed& ts, int* bot_evals = nullptr);

/// Runs every (point, shift); precondition failures become per-row errors.
TrialReport run_experiment(const ExperimentSpec& spec);
/// Same counts on a single thread, without OpenMP.
TrialReport run_experiment_serial(const ExperimentSpec& spec);

/// Fit over points using, per d, the largest delta_hat among unit shifts (the only shift in 1D).
SlopeFit scaling_fit(const TrialReport& r);

inline constexpr const char* kCsvHeader = "algo,d,n,b,shift,trials,failures,delta_hat,ci_lo,ci_hi";
void write_csv(std::ostream& os, const TrialReport& r);
std::string to_csv(const TrialReport& r);
std::string to_json(const TrialReport& r);

struct Preset {
  std::string name;
  std::string description;
  ExperimentSpec spec;
  bool fit = false;  // report a scaling slope
};

const std::vector<Preset>& presets();
std::optional<Preset> find_preset(const std::string& name);

}  // namespace lphs
