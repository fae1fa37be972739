#include "satrep/mc.hpp"

#include "satrep/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <sstream>
#include <thread>

namespace satrep {

std::string to_string(TimeModel m) { return m == TimeModel::ConstantP ? "constant-p" : "time-resolved"; }

TimeModel parse_time_model(const std::string& s) {
  if (s == "constant-p") return TimeModel::ConstantP;
  if (s == "time-resolved") return TimeModel::TimeResolved;
  throw ConfigError("unknown time model '" + s + "' (expected constant-p or time-resolved)");
}

McEstimate estimate(std::span<const double> x) {
  McEstimate e;
  e.n = x.size();
  if (x.empty()) {
    e.mean = std::numeric_limits<double>::quiet_NaN();
    e.std_err = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  CompensatedSum sum;
  for (double v : x) sum.add(v);
  e.mean = sum.value() / static_cast<double>(e.n);
  if (e.n < 2) {
    e.std_err = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  double ss = 0.0;
  for (double v : x) ss += (v - e.mean) * (v - e.mean);
  e.std_err = std::sqrt(ss / static_cast<double>(e.n - 1)) / std::sqrt(static_cast<double>(e.n));
  return e;
}

McEstimate estimate_ratio(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw std::invalid_argument("estimate_ratio: size mismatch");
  McEstimate e;
  e.n = num.size();
  e.mean = std::numeric_limits<double>::quiet_NaN();
  e.std_err = std::numeric_limits<double>::quiet_NaN();
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < e.n; ++i) {
    sx.add(num[i]);
    sy.add(den[i]);
  }
  if (!(sy.value() > 0.0)) return e;
  e.mean = sx.value() / sy.value();
  if (e.n < 2) return e;
  double ss = 0.0;
  for (std::size_t i = 0; i < e.n; ++i) {
    const double r = num[i] - e.mean * den[i];
    ss += r * r;
  }
  const double n = static_cast<double>(e.n);
  const double mean_den = sy.value() / n;
  e.std_err = std::sqrt(ss / (n * (n - 1.0))) / mean_den;
  return e;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5a7e11u};
  engine_.seed(seq);
}

double simulate_link(double interval, double p, RandomStream& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("simulate_link: success probability must lie in (0, 1]");
  if (p >= 1.0) return interval;
  const double attempts = 1.0 + std::floor(std::log(rng.uniform()) / std::log1p(-p));
  return attempts * interval;
}

LinkClock LinkClock::constant(double interval, double p, double horizon) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("LinkClock: success probability must lie in (0, 1]");
  LinkClock c;
  c.interval_ = interval;
  c.p_ = p;
  c.inv_log_q_ = p < 1.0 ? 1.0 / std::log1p(-p) : 0.0;
  c.horizon_ = horizon;
  return c;
}

LinkClock LinkClock::time_resolved(double interval, double success_per_transmission, const FlybyProfile& profile) {
  LinkClock c;
  c.interval_ = interval;
  c.horizon_ = profile.flyby_s;
  const auto n = static_cast<std::size_t>(profile.size());
  c.grid_.resize(n);
  c.cumulative_.assign(n, 0.0);
  std::vector<double> hazard(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.grid_[i] = profile.times[static_cast<Eigen::Index>(i)];
    const double p = std::min(success_per_transmission * profile.eta2_tr[static_cast<Eigen::Index>(i)], 1.0);
    hazard[i] = p >= 1.0 ? std::numeric_limits<double>::max() : -std::log1p(-p) / interval;
  }
  for (std::size_t i = 1; i < n; ++i) {
    c.cumulative_[i] = c.cumulative_[i - 1] + 0.5 * (hazard[i] + hazard[i - 1]) * (c.grid_[i] - c.grid_[i - 1]);
  }
  return c;
}

double LinkClock::completion(double start, RandomStream& rng) const {
  if (grid_.empty()) {
    if (p_ >= 1.0) return start + interval_;
    return start + (1.0 + std::floor(std::log(rng.uniform()) * inv_log_q_)) * interval_;
  }
  // Invert the cumulative hazard, then snap to the next attempt slot.
  const auto at = [this](double t) {
    if (t >= grid_.back()) return cumulative_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return cumulative_[i] + w * (cumulative_[i + 1] - cumulative_[i]);
  };
  const double target = at(start) + rng.exponential();
  if (target > cumulative_.back()) return std::numeric_limits<double>::infinity();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
  const std::size_t j = std::max<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), 1);
  const double span = cumulative_[j] - cumulative_[j - 1];
  const double w = span > 0.0 ? (target - cumulative_[j - 1]) / span : 1.0;
  const double t = grid_[j - 1] + w * (grid_[j] - grid_[j - 1]);
  const double slots = std::max(1.0, std::ceil((t - start) / interval_));
  return start + slots * interval_;
}

namespace {

struct ChainModel {
  const LinkClock* clock;
  double base_werner;
  double swap_factor;  // F_Ry F_m^2
  double gamma_s;
  double gate_efficiency;
  int n_levels;
};

struct Segment {
  double done;
  double werner;
  bool ok;
};

Segment build_segment(const ChainModel& m, int level, double start, RandomStream& rng, TrialRecord& rec) {
  if (level == 0) {
    const double t = m.clock->completion(start, rng);
    if (std::isfinite(t)) {
      rec.link_time_sum.add(t - start);
      ++rec.link_count;
    }
    return {t, m.base_werner, t <= m.clock->horizon()};
  }
  const Segment a = build_segment(m, level - 1, start, rng, rec);
  if (!a.ok) return a;
  const Segment b = build_segment(m, level - 1, start, rng, rec);
  if (!b.ok) return b;
  const bool a_first = a.done <= b.done;
  const Segment& early = a_first ? a : b;
  const Segment& late = a_first ? b : a;
  const double gap = late.done - early.done;
  const double werner = m.swap_factor * werner_fidelity_decay(early.werner, m.gamma_s, gap) * late.werner;
  const auto k = static_cast<std::size_t>(level - 1);
  rec.gap_sum[k].add(gap);
  rec.werner_sum[k].add(werner);
  ++rec.merges[k];
  return {late.done, werner, rng.bernoulli(m.gate_efficiency)};
}

TrialRecord run_trial(const ChainModel& m, RandomStream& rng) {
  TrialRecord rec;
  const auto levels = static_cast<std::size_t>(m.n_levels);
  rec.gap_sum.assign(levels, {});
  rec.werner_sum.assign(levels, {});
  rec.merges.assign(levels, 0);
  double t = 0.0;
  while (t < m.clock->horizon()) {
    const Segment s = build_segment(m, m.n_levels, t, rng, rec);
    if (!(s.done <= m.clock->horizon())) break;
    if (s.ok) ++rec.pairs;
    t = s.done;
  }
  return rec;
}

}  // namespace

McRun simulate_chain(const McConfig& mc, const RepeaterConfig& cfg, const FlybyAggregates& agg,
                     const FlybyProfile* profile) {
  cfg.validate();
  if (cfg.n_levels < 1) throw DomainError("simulate_chain: need at least one nesting level");
  if (mc.trials < 1) throw ConfigError("simulate_chain: trials must be positive");

  const double interval = 1.0 / (cfg.source.mux_channels * cfg.source.repetition_rate_hz);
  LinkClock clock;
  if (mc.time_model == TimeModel::ConstantP) {
    clock = LinkClock::constant(interval, elementary_attempt_success(cfg, agg), agg.flyby_s);
  } else {
    if (profile == nullptr) throw ConfigError("simulate_chain: time-resolved mode needs a flyby profile");
    const double per_transmission = agg.p0 > 0.0 ? elementary_attempt_success(cfg, agg) / agg.p0 : 0.0;
    clock = LinkClock::time_resolved(interval, per_transmission, *profile);
  }

  const ChainModel model{&clock,
                         elementary_link_fidelity(agg.f_pair_avg, cfg.node.caps_fidelity),
                         cfg.node.rydberg_fidelity * cfg.node.readout_fidelity * cfg.node.readout_fidelity,
                         cfg.node.spin_decoherence_rate_hz,
                         cfg.gate_efficiency,
                         cfg.n_levels};

  McRun run;
  run.trials.resize(mc.trials);
  unsigned threads = mc.threads ? mc.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, mc.trials));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t i = w; i < mc.trials; i += threads) {
          RandomStream rng(mc.seed, i);
          run.trials[i] = run_trial(model, rng);
        }
      });
    }
  }

  McResult& r = run.result;
  r.n_levels = cfg.n_levels;
  r.trials = mc.trials;
  r.seed = mc.seed;
  r.time_model = mc.time_model;
  r.p0 = agg.p0;
  r.flyby_s = agg.flyby_s;

  std::vector<double> pairs, rates, link_time, links;
  for (const TrialRecord& t : run.trials) {
    pairs.push_back(t.pairs);
    rates.push_back(t.pairs / agg.flyby_s);
    link_time.push_back(t.link_time_sum.value());
    links.push_back(t.link_count);
  }
  r.pairs_per_flyby = estimate(pairs);
  r.rate_hz = estimate(rates);
  r.elementary_time_s = estimate_ratio(link_time, links);

  r.fidelity_per_level.push_back({model.base_werner, 0.0, mc.trials});
  for (int k = 1; k <= cfg.n_levels; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    std::vector<double> werner, gaps, merges;
    for (const TrialRecord& t : run.trials) {
      werner.push_back(t.werner_sum[idx].value());
      gaps.push_back(t.gap_sum[idx].value());
      merges.push_back(t.merges[idx]);
    }
    r.fidelity_per_level.push_back(estimate_ratio(werner, merges));
    r.waiting_gap_s.push_back(estimate_ratio(gaps, merges));
  }
  return run;
}

bool ComparisonReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; });
}

const ComparisonRow& ComparisonReport::row(const std::string& quantity) const {
  for (const auto& r : rows) {
    if (r.quantity == quantity) return r;
  }
  throw std::out_of_range("comparison report has no row '" + quantity + "'");
}

namespace {

enum class Rule { ZScore, Fidelity, Waiting };

ComparisonRow compare_one(const std::string& name, double analytic, const McEstimate& e, Rule rule,
                          const CompareTolerances& tol) {
  ComparisonRow row;
  row.quantity = name;
  row.analytic = analytic;
  row.mc_mean = e.mean;
  const double diff = e.mean - analytic;
  // Differences at rounding level count as exact agreement.
  const bool exact = std::abs(diff) <= 1e-13 * std::max(1.0, std::abs(analytic));
  if (e.std_err_defined()) {
    row.mc_stderr = e.std_err;
    if (exact) {
      row.z = 0.0;
    } else if (e.std_err > 0.0) {
      row.z = diff / e.std_err;
    } else {
      row.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
  }
  const double rel = analytic != 0.0 ? std::abs(diff) / std::abs(analytic) : std::abs(diff);
  const bool z_ok = row.z && std::abs(*row.z) <= tol.z_max;
  switch (rule) {
    case Rule::ZScore:
      row.pass = z_ok;
      break;
    case Rule::Fidelity:
      row.pass = z_ok || rel <= tol.fidelity_rel;
      break;
    case Rule::Waiting:
      row.pass = rel <= tol.waiting_rel;
      break;
  }
  if (!std::isfinite(e.mean)) row.pass = false;
  return row;
}

}  // namespace

ComparisonReport compare_report(const RepeaterResult& analytic, const McResult& mc, const CompareTolerances& tol) {
  const auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  if (analytic.n_levels != mc.n_levels || !same(analytic.aggregates.p0, mc.p0) ||
      !same(analytic.aggregates.flyby_s, mc.flyby_s)) {
    throw ConfigError("compare_report: analytic result and Monte Carlo run come from different configurations");
  }
  ComparisonReport rep;
  rep.rows.push_back(compare_one("rate_hz", analytic.rate_hz, mc.rate_hz, Rule::ZScore, tol));
  rep.rows.push_back(compare_one("pairs_per_flyby", analytic.pairs_per_flyby, mc.pairs_per_flyby, Rule::ZScore, tol));
  rep.rows.push_back(
      compare_one("elementary_time_s", analytic.elementary_time_s, mc.elementary_time_s, Rule::ZScore, tol));
  for (int k = 1; k <= analytic.n_levels; ++k) {
    const auto i = static_cast<std::size_t>(k);
    rep.rows.push_back(compare_one("T_" + std::to_string(k), analytic.waiting_time_per_level[i - 1],
                                   mc.waiting_gap_s[i - 1], Rule::Waiting, tol));
  }
  for (int k = 1; k <= analytic.n_levels; ++k) {
    const auto i = static_cast<std::size_t>(k);
    rep.rows.push_back(compare_one("F_" + std::to_string(k), analytic.fidelity_per_level[i],
                                   mc.fidelity_per_level[i], Rule::Fidelity, tol));
  }
  return rep;
}

std::string to_json(const ComparisonReport& report, const McResult& mc) {
  using nlohmann::json;
  const auto num = [](std::optional<double> v) -> json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"quantity", r.quantity},
                    {"analytic", num(r.analytic)},
                    {"mc_mean", num(r.mc_mean)},
                    {"mc_stderr", num(r.mc_stderr)},
                    {"z", num(r.z)},
                    {"pass", r.pass}});
  }
  json doc = {{"n_levels", mc.n_levels},
              {"trials", mc.trials},
              {"seed", mc.seed},
              {"time_model", to_string(mc.time_model)},
              {"stderr_defined", mc.trials >= 2},
              {"pass", report.all_pass()},
              {"rows", rows}};
  return doc.dump(2) + "\n";
}

std::string trials_csv(const McRun& run) {
  std::ostringstream out;
  out.precision(12);
  const int n = run.result.n_levels;
  out << "trial,pairs,mean_link_time_s";
  for (int k = 1; k <= n; ++k) out << ",mean_gap_L" << k << "_s,mean_werner_L" << k;
  out << "\n";
  for (std::size_t i = 0; i < run.trials.size(); ++i) {
    const TrialRecord& t = run.trials[i];
    out << i << ',' << t.pairs << ',';
    if (t.link_count) out << t.link_time_sum.value() / t.link_count;
    for (int k = 0; k < n; ++k) {
      out << ',';
      if (t.merges[k]) out << t.gap_sum[k].value() / t.merges[k];
      out << ',';
      if (t.merges[k]) out << t.werner_sum[k].value() / t.merges[k];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace satrep
