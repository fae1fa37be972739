#include "satrep/commands.hpp"

#include "satrep/errors.hpp"
#include "satrep/io.hpp"
#include "satrep/node.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace satrep {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sweep_header(int max_levels) {
  std::vector<std::string> cols{"L_total_km", "n_levels", "h_km", "L0_km", "T_FB_s", "P0",
                                "F_pair_avg", "rate_hz", "pairs_per_flyby", "fidelity_final"};
  for (int k = 0; k <= max_levels; ++k) cols.push_back("F" + std::to_string(k));
  cols.push_back("scheme");
  cols.push_back("status");
  return io::join(cols);
}

std::vector<std::string> sweep_fields(const SweepRow& row, int max_levels) {
  using io::number;
  const RepeaterResult& r = row.result;
  const bool ok = row.visible;
  std::vector<std::string> f{number(row.total_distance_m / 1e3),
                             std::to_string(row.n_levels),
                             number(row.altitude_m / 1e3),
                             number(row.link_length_m / 1e3),
                             number(ok ? r.aggregates.flyby_s : kNaN),
                             number(ok ? r.aggregates.p0 : kNaN),
                             number(ok ? r.aggregates.f_pair_avg : kNaN),
                             number(ok ? r.rate_hz : kNaN),
                             number(ok ? r.pairs_per_flyby : kNaN),
                             number(ok ? r.final_fidelity() : kNaN)};
  for (int k = 0; k <= max_levels; ++k) {
    const bool have = ok && k < static_cast<int>(r.fidelity_per_level.size());
    f.push_back(have ? number(r.fidelity_per_level[static_cast<std::size_t>(k)]) : std::string());
  }
  f.push_back(row.scheme == Scheme::Repeater ? "repeater" : "direct");
  f.push_back(ok ? "ok" : "no_visibility");
  return f;
}

std::vector<SweepRow> sweep_rows(const Scenario& s, const SweepOptions& opts) {
  const RepeaterConfig& base = s.repeater;
  std::vector<int> levels = opts.levels.empty() ? std::vector<int>{base.n_levels} : opts.levels;
  std::vector<double> altitudes =
      opts.altitudes_m.empty() ? std::vector<double>{base.geometry.altitude_m} : opts.altitudes_m;
  std::vector<double> distances_m;
  if (opts.distances_km) {
    for (double km : *opts.distances_km) distances_m.push_back(km * 1e3);
  } else {
    distances_m.push_back(base.total_distance_m());
  }

  std::vector<SweepRow> rows;
  for (double h : altitudes) {
    RepeaterConfig cfg = base;
    cfg.geometry.altitude_m = h;
    for (int n : levels) {
      cfg.n_levels = n;
      auto part = distance_sweep(cfg, distances_m, s.quadrature);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    if (opts.direct) {
      auto part = direct_sweep(cfg, distances_m, s.quadrature);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  return rows;
}

int max_level(const std::vector<SweepRow>& rows, int fallback) {
  int m = fallback;
  for (const auto& r : rows) m = std::max(m, r.n_levels);
  return m;
}

}  // namespace

std::string flyby_csv(const Scenario& s) {
  const RepeaterConfig& cfg = s.repeater;
  cfg.geometry.validate();
  cfg.channel.validate();
  const FlybyAggregates agg = flyby_aggregates(cfg.geometry, cfg.channel, cfg.source.pair_fidelity, s.quadrature);
  const FlybyProfile p = build_profile(cfg.geometry, cfg.channel, cfg.source.pair_fidelity, s.quadrature.samples);

  std::ostringstream out;
  out << provenance_line(s, "flyby") << '\n';
  out << "# T_FB_s=" << io::number(agg.flyby_s) << "; P0=" << io::number(agg.p0)
      << "; F_pair_avg=" << io::number(agg.f_pair_avg) << '\n';
  out << "t_s,d_m,zenith_rad,eta_tr,eta2_tr,f_pair\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    out << io::join({io::number(p.times[i]), io::number(p.distance[i]), io::number(p.zenith[i]),
                     io::number(p.eta_tr[i]), io::number(p.eta2_tr[i]), io::number(p.f_pair[i])})
        << '\n';
  }
  return out.str();
}

std::string rates_csv(const Scenario& s, const SweepOptions& opts) {
  const auto rows = sweep_rows(s, opts);
  const int levels = max_level(rows, opts.levels.empty() ? s.repeater.n_levels
                                                         : *std::max_element(opts.levels.begin(), opts.levels.end()));
  std::ostringstream out;
  out << provenance_line(s, "rates") << '\n' << sweep_header(levels) << '\n';
  for (const auto& row : rows) out << io::join(sweep_fields(row, levels)) << '\n';
  return out.str();
}

std::string sensitivity_csv(const Scenario& s, const std::string& key, const std::vector<std::string>& values,
                            const SweepOptions& opts) {
  const auto sweepable = sweepable_keys();
  if (std::find(sweepable.begin(), sweepable.end(), key) == sweepable.end()) {
    std::string msg = "'" + key + "' cannot be varied; sweepable keys:";
    for (const auto& k : sweepable) msg += "\n  " + k;
    throw ConfigError(msg);
  }
  std::vector<std::pair<std::string, SweepRow>> rows;
  int levels = s.repeater.n_levels;
  for (const auto& v : opts.levels) levels = std::max(levels, v);
  for (const auto& value : values) {
    Scenario varied = s;
    set_value(varied, key, value);
    for (auto& row : sweep_rows(varied, opts)) {
      levels = std::max(levels, row.n_levels);
      rows.emplace_back(value, std::move(row));
    }
  }
  std::ostringstream out;
  out << provenance_line(s, "sensitivity " + key) << '\n';
  out << "param,value," << sweep_header(levels) << '\n';
  for (const auto& [value, row] : rows) out << key << ',' << value << ',' << io::join(sweep_fields(row, levels)) << '\n';
  return out.str();
}

McOutput mc_report(const Scenario& s, bool keep_trials, const CompareTolerances& tol) {
  const RepeaterConfig& cfg = s.repeater;
  const RepeaterResult analytic = evaluate(cfg, s.quadrature);
  FlybyProfile profile;
  const FlybyProfile* profile_ptr = nullptr;
  if (s.mc.time_model == TimeModel::TimeResolved) {
    profile = build_profile(cfg.geometry, cfg.channel, cfg.source.pair_fidelity, s.quadrature.samples);
    profile_ptr = &profile;
  }
  McRun run = simulate_chain(s.mc, cfg, analytic.aggregates, profile_ptr);
  const ComparisonReport report = compare_report(analytic, run.result, tol);
  McOutput out;
  out.json = to_json(report, run.result);
  out.pass = report.all_pass();
  if (keep_trials) out.trials_csv = provenance_line(s, "mc") + "\n" + trials_csv(run);
  return out;
}

std::string caps_curve_csv(double c_min, double c_max, int points) {
  if (!(c_min > 0.0 && c_max >= c_min && std::isfinite(c_max))) {
    throw DomainError("caps-curve: need 0 < c_min <= c_max");
  }
  if (points < 1) throw DomainError("caps-curve: need at least one point");
  std::ostringstream out;
  out << "# satrep caps-curve; c_min=" << io::number(c_min) << "; c_max=" << io::number(c_max)
      << "; points=" << points << "; kappa_in=1; gamma=1\n";
  out << "C_in,kappa_ex_over_kappa_in,r0,r1,eta_caps\n";
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const double c = c_min * std::pow(c_max / c_min, frac);
    CavityParams cav{std::sqrt(2.0 * c), 1.0, 0.0, 1.0};
    cav.kappa_ex = optimal_external_coupling(cav);
    const Reflectivities r = reflectivities(cav);
    out << io::join({io::number(c), io::number(cav.kappa_ex), io::number(r.uncoupled), io::number(r.coupled),
                     io::number(caps_success(c))})
        << '\n';
  }
  return out.str();
}

std::string decoherence_csv(const Scenario& s, double t_max_s, int points) {
  if (!(t_max_s >= 0.0) || points < 1) throw DomainError("decoherence: need t_max >= 0 and at least one point");
  const RepeaterResult r = evaluate(s.repeater, s.quadrature);
  const double f0 = r.fidelity_per_level.front();
  std::vector<double> times;
  for (int i = 0; i < points; ++i) times.push_back(points == 1 ? 0.0 : t_max_s * i / (points - 1));
  const double gamma = s.repeater.node.spin_decoherence_rate_hz;
  std::ostringstream out;
  out << provenance_line(s, "decoherence") << '\n';
  out << "t_s,trace,singlet_overlap_matrix,werner_decay\n";
  for (const auto& row : compare_decoherence_models(f0, gamma, 0.0, times)) {
    out << io::join({io::number(row.t), io::number(row.trace), io::number(row.singlet_overlap_matrix),
                     io::number(row.werner_decay)})
        << '\n';
  }
  return out.str();
}

}  // namespace satrep
