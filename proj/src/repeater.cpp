#include "satrep/repeater.hpp"

#include "satrep/errors.hpp"

#include <cmath>
#include <sstream>

namespace satrep {

void RepeaterConfig::validate() const {
  if (n_levels < 0 || n_levels > 20) throw DomainError("repeater: nesting level must lie in [0, 20]");
  if (!(gate_efficiency > 0.0 && gate_efficiency <= 1.0)) {
    throw DomainError("repeater: gate efficiency must lie in (0, 1]");
  }
  if (detector_exponent != 1 && detector_exponent != 2) {
    throw DomainError("repeater: detector exponent must be 1 or 2");
  }
  geometry.validate();
  channel.validate();
  source.validate();
  node.validate();
}

double swap_probability(int n, double gate_efficiency) {
  if (n < 0) throw DomainError("swap_probability: negative nesting level");
  return std::pow(2.0 / 3.0 * gate_efficiency, n);
}

double elementary_attempt_success(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  const double eta_demux = cfg.source.demux_efficiency;
  return eta_demux * eta_demux * cfg.source.emission_efficiency * agg.p0 * resolved_caps_efficiency(cfg.node) *
         std::pow(cfg.node.detection_efficiency, cfg.detector_exponent);
}

double rate(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  return cfg.source.repetition_rate_hz * cfg.source.emission_efficiency * agg.p0 *
         resolved_caps_efficiency(cfg.node) * std::pow(cfg.node.detection_efficiency, cfg.detector_exponent) *
         swap_probability(cfg.n_levels, cfg.gate_efficiency);
}

double rate_multiplexed(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  const double eta_demux = cfg.source.demux_efficiency;
  return cfg.source.mux_channels * eta_demux * eta_demux * rate(cfg, agg);
}

double rate_direct(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  return cfg.source.mux_channels * cfg.source.direct_repetition_rate_hz * cfg.source.emission_efficiency * agg.p0;
}

double elementary_time(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  const double attempts = cfg.source.mux_channels * cfg.source.repetition_rate_hz;
  const double denom = attempts * elementary_attempt_success(cfg, agg);
  if (!(denom > 0.0)) throw DomainError("elementary_time: zero elementary success rate");
  return 1.0 / denom;
}

double waiting_time(int level, const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  if (level < 1) throw DomainError("waiting_time: defined for nesting levels >= 1");
  return 0.5 * std::pow(1.5, level - 1) * elementary_time(cfg, agg);
}

std::vector<double> final_fidelity(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  std::vector<double> f{elementary_link_fidelity(agg.f_pair_avg, cfg.node.caps_fidelity)};
  const double swap = cfg.node.rydberg_fidelity * cfg.node.readout_fidelity * cfg.node.readout_fidelity;
  for (int k = 1; k <= cfg.n_levels; ++k) {
    const double prev = f.back();
    const double early = werner_fidelity_decay(prev, cfg.node.spin_decoherence_rate_hz, waiting_time(k, cfg, agg));
    const double next = swap * early * prev;
    if (!(next >= -1.0 / 3.0 && next <= 1.0)) {
      std::ostringstream msg;
      msg << "final_fidelity: Werner parameter " << next << " at level " << k << " is unphysical";
      throw UnphysicalStateError(msg.str());
    }
    f.push_back(next);
  }
  return f;
}

RepeaterResult evaluate(const RepeaterConfig& cfg, const FlybyAggregates& agg) {
  cfg.validate();
  RepeaterResult r;
  r.n_levels = cfg.n_levels;
  r.total_distance_m = cfg.total_distance_m();
  r.aggregates = agg;
  r.rate_hz = rate_multiplexed(cfg, agg);
  r.pairs_per_flyby = pairs_per_flyby(r.rate_hz, agg.flyby_s);
  r.elementary_time_s = elementary_time(cfg, agg);
  r.fidelity_per_level = final_fidelity(cfg, agg);
  for (int k = 1; k <= cfg.n_levels; ++k) r.waiting_time_per_level.push_back(waiting_time(k, cfg, agg));
  return r;
}

RepeaterResult evaluate(const RepeaterConfig& cfg, const QuadratureOptions& opts) {
  cfg.validate();
  return evaluate(cfg, flyby_aggregates(cfg.geometry, cfg.channel, cfg.source.pair_fidelity, opts));
}

std::vector<SweepRow> distance_sweep(const RepeaterConfig& tmpl, const std::vector<double>& totals,
                                     const QuadratureOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(totals.size());
  for (double total : totals) {
    RepeaterConfig cfg = tmpl;
    cfg.geometry.link_length_m = total / cfg.link_count();
    SweepRow row;
    row.scheme = Scheme::Repeater;
    row.n_levels = cfg.n_levels;
    row.total_distance_m = total;
    row.altitude_m = cfg.geometry.altitude_m;
    row.link_length_m = cfg.geometry.link_length_m;
    row.visible = pass_timing(cfg.geometry).visible();
    if (row.visible) row.result = evaluate(cfg, opts);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> direct_sweep(const RepeaterConfig& tmpl, const std::vector<double>& totals,
                                   const QuadratureOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(totals.size());
  for (double total : totals) {
    RepeaterConfig cfg = tmpl;
    cfg.n_levels = 0;
    cfg.geometry.link_length_m = total;
    SweepRow row;
    row.scheme = Scheme::Direct;
    row.n_levels = 0;
    row.total_distance_m = total;
    row.altitude_m = cfg.geometry.altitude_m;
    row.link_length_m = total;
    row.visible = pass_timing(cfg.geometry).visible();
    if (row.visible) {
      cfg.validate();
      const FlybyAggregates agg = flyby_aggregates(cfg.geometry, cfg.channel, cfg.source.pair_fidelity, opts);
      row.result.total_distance_m = total;
      row.result.aggregates = agg;
      row.result.rate_hz = rate_direct(cfg, agg);
      row.result.pairs_per_flyby = pairs_per_flyby(row.result.rate_hz, agg.flyby_s);
      // No memories are involved; the delivered pair fidelity is the photon pair's.
      row.result.fidelity_per_level = {agg.f_pair_avg};
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace satrep
