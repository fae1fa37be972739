#pragma once

// Nested-repeater rates, waiting times and the fidelity recursion.

#include "satrep/channel.hpp"
#include "satrep/flyby.hpp"
#include "satrep/node.hpp"
#include "satrep/orbit.hpp"

#include <string>
#include <vector>

namespace satrep {

struct RepeaterConfig {
  int n_levels = 2;  // 2^n elementary links
  double gate_efficiency = 1.0;
  /// Power of the detection efficiency in the rate and waiting-time
  /// denominators. 1 follows the main-text rate formulas, 2 the appendix.
  int detector_exponent = 1;
  OrbitGeometry geometry;
  ChannelParams channel;
  SourceParams source;
  NodeParams node;

  int link_count() const { return 1 << n_levels; }
  double total_distance_m() const { return geometry.link_length_m * link_count(); }
  void validate() const;
};

struct RepeaterResult {
  int n_levels = 0;
  double total_distance_m = 0.0;
  double rate_hz = 0.0;  // multiplexed distribution rate
  double pairs_per_flyby = 0.0;
  std::vector<double> fidelity_per_level;      // F_0 .. F_n
  std::vector<double> waiting_time_per_level;  // T_1 .. T_n
  double elementary_time_s = 0.0;              // T_0
  FlybyAggregates aggregates;

  double final_fidelity() const { return fidelity_per_level.back(); }
};

double swap_probability(int n, double gate_efficiency);

/// Single-channel rate without multiplexing.
double rate(const RepeaterConfig& cfg, const FlybyAggregates& agg);
double rate_multiplexed(const RepeaterConfig& cfg, const FlybyAggregates& agg);
/// Direct transmission over one link from one satellite.
double rate_direct(const RepeaterConfig& cfg, const FlybyAggregates& agg);

inline double pairs_per_flyby(double rate_hz, double flyby_s) { return rate_hz * flyby_s; }

/// Success probability of one elementary attempt on one channel, i.e. the
/// factor that multiplies N_mux R_s in the elementary attempt rate.
double elementary_attempt_success(const RepeaterConfig& cfg, const FlybyAggregates& agg);

double elementary_time(const RepeaterConfig& cfg, const FlybyAggregates& agg);
double waiting_time(int level, const RepeaterConfig& cfg, const FlybyAggregates& agg);

/// F_0 .. F_n. Throws UnphysicalStateError if any level leaves [-1/3, 1].
std::vector<double> final_fidelity(const RepeaterConfig& cfg, const FlybyAggregates& agg);

RepeaterResult evaluate(const RepeaterConfig& cfg, const FlybyAggregates& agg);
RepeaterResult evaluate(const RepeaterConfig& cfg, const QuadratureOptions& opts = {});

enum class Scheme { Repeater, Direct };

struct SweepRow {
  Scheme scheme = Scheme::Repeater;
  int n_levels = 0;
  double total_distance_m = 0.0;
  double altitude_m = 0.0;
  double link_length_m = 0.0;
  bool visible = false;
  RepeaterResult result;  // meaningful only when visible
};

/// One row per grid point; points without a visibility window are flagged
/// rather than dropped. Rows keep the grid order.
std::vector<SweepRow> distance_sweep(const RepeaterConfig& tmpl, const std::vector<double>& total_distances_m,
                                     const QuadratureOptions& opts = {});

/// Direct transmission rows for the same grid (one link spanning L_total).
std::vector<SweepRow> direct_sweep(const RepeaterConfig& tmpl, const std::vector<double>& total_distances_m,
                                   const QuadratureOptions& opts = {});

}  // namespace satrep
