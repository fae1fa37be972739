#pragma once

// Discrete-event Monte Carlo of the nested repeater over one flyby. Used to
// check the analytic rate, waiting-time and fidelity recursions.
//
// Each trial is one flyby. Chains are built back to back from t = 0: all 2^n
// elementary links start attempting together, a finished sub-chain idles
// until its sibling finishes, and the early one's Werner parameter decays
// over the gap before the swap. A chain that cannot finish before T_FB is
// dropped. A failed swap restarts the whole chain.

#include "satrep/flyby.hpp"
#include "satrep/repeater.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace satrep {

enum class TimeModel { ConstantP, TimeResolved };

std::string to_string(TimeModel m);
TimeModel parse_time_model(const std::string& s);

struct McConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 20240917;
  TimeModel time_model = TimeModel::ConstantP;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;  // NaN when fewer than two samples
  std::uint64_t n = 0;

  bool std_err_defined() const { return n >= 2; }
};

McEstimate estimate(std::span<const double> samples);

/// Pooled ratio sum(num) / sum(den) with a delta-method standard error; one
/// (num, den) pair per trial. Unlike the mean of per-trial ratios it has no
/// bias from the random number of events per trial.
McEstimate estimate_ratio(std::span<const double> num, std::span<const double> den);

/// Compensated (Neumaier) running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

/// Independent stream for (seed, index). Same inputs give the same
/// sequence on every platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on (0, 1].
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform()); }
  bool bernoulli(double p) { return p >= 1.0 || uniform() <= p; }

 private:
  std::mt19937_64 engine_;
};

/// Time to the first heralded success when attempts are made every
/// attempt_interval_s with fixed success probability.
double simulate_link(double attempt_interval_s, double p_success, RandomStream& rng);

/// Elementary-link attempt clock over a flyby. In time-resolved mode the
/// per-attempt success follows the profile's two-photon transmission.
class LinkClock {
 public:
  static LinkClock constant(double attempt_interval_s, double p_success, double horizon_s);
  static LinkClock time_resolved(double attempt_interval_s, double success_per_transmission,
                                 const FlybyProfile& profile);

  /// Absolute completion time of a link started at `start`. May exceed the horizon.
  double completion(double start, RandomStream& rng) const;
  double horizon() const { return horizon_; }
  double attempt_interval() const { return interval_; }

 private:
  double interval_ = 0.0;
  double p_ = 0.0;
  double inv_log_q_ = 0.0;  // 1 / log(1 - p)
  double horizon_ = 0.0;
  // Cumulative hazard -log(1 - p(t)) / interval on the profile grid.
  std::vector<double> grid_;
  std::vector<double> cumulative_;
};

struct McResult {
  int n_levels = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  TimeModel time_model = TimeModel::ConstantP;
  double p0 = 0.0;
  double flyby_s = 0.0;

  McEstimate pairs_per_flyby;
  McEstimate rate_hz;
  McEstimate elementary_time_s;
  std::vector<McEstimate> fidelity_per_level;  // index k = level, 0..n
  std::vector<McEstimate> waiting_gap_s;       // index k-1 for level k, 1..n
};

/// Per-trial record, kept for the optional CSV dump.
struct TrialRecord {
  std::uint32_t pairs = 0;
  CompensatedSum link_time_sum;
  std::uint32_t link_count = 0;
  std::vector<CompensatedSum> gap_sum;  // per level 1..n
  std::vector<std::uint32_t> merges; // per level 1..n
  std::vector<CompensatedSum> werner_sum;  // per level 1..n
};

struct McRun {
  McResult result;
  std::vector<TrialRecord> trials;
};

McRun simulate_chain(const McConfig& mc, const RepeaterConfig& cfg, const FlybyAggregates& agg,
                     const FlybyProfile* profile = nullptr);

struct CompareTolerances {
  double z_max = 3.0;
  double fidelity_rel = 0.01;
  double waiting_rel = 0.15;
};

struct ComparisonRow {
  std::string quantity;
  double analytic = 0.0;
  double mc_mean = 0.0;
  std::optional<double> mc_stderr;
  std::optional<double> z;
  bool pass = false;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool all_pass() const;
  const ComparisonRow& row(const std::string& quantity) const;
};

/// Lines up the analytic and sampled values. Rates and pair counts pass on
/// |z| <= z_max; fidelities on |z| <= z_max or relative error <=
/// fidelity_rel; waiting times on relative error <= waiting_rel.
ComparisonReport compare_report(const RepeaterResult& analytic, const McResult& mc,
                                const CompareTolerances& tol = {});

std::string to_json(const ComparisonReport& report, const McResult& mc);
std::string trials_csv(const McRun& run);

}  // namespace satrep
