#include "satrep/errors.hpp"
#include "satrep/mc.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace satrep;
using doctest::Approx;

namespace {

RepeaterConfig table1(int n_levels) {
  RepeaterConfig cfg;
  cfg.n_levels = n_levels;
  return cfg;
}

McConfig runs(std::uint64_t trials, std::uint64_t seed = 11) {
  McConfig mc;
  mc.trials = trials;
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST_SUITE("mc") {
  TEST_CASE("uniform draws stay in (0, 1]") {
    RandomStream rng(1, 0);
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u <= 1.0);
    }
  }

  TEST_CASE("single link") {
    RandomStream rng(3, 0);
    CHECK(simulate_link(0.25, 1.0, rng) == 0.25);
    CHECK_THROWS_AS(simulate_link(0.25, 0.0, rng), DomainError);

    const RepeaterConfig cfg = table1(2);
    const FlybyAggregates agg = flyby_aggregates(cfg.geometry, cfg.channel, cfg.source.pair_fidelity);
    const double interval = 1.0 / (cfg.source.mux_channels * cfg.source.repetition_rate_hz);
    const double p = elementary_attempt_success(cfg, agg);
    std::vector<double> samples(1000000);
    RandomStream stream(5, 0);
    for (double& s : samples) s = simulate_link(interval, p, stream);
    const McEstimate e = estimate(samples);
    const double t0 = elementary_time(cfg, agg);
    CHECK(std::abs(e.mean - t0) < 3.0 * e.std_err);
  }

  TEST_CASE("disjoint streams are uncorrelated") {
    RandomStream a(42, 0), b(42, 1);
    const int n = 200000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
      const double x = a.uniform(), y = b.uniform();
      sa += x;
      sb += y;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    const double cov = sab / n - sa / n * sb / n;
    const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
    CHECK(std::abs(r) < 3.0 / std::sqrt(static_cast<double>(n)));
  }

  TEST_CASE("estimates") {
    const std::vector<double> one{2.0};
    const McEstimate e = estimate(one);
    CHECK(e.mean == 2.0);
    CHECK_FALSE(e.std_err_defined());
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(estimate(x).std_err == Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-15));
    const std::vector<double> num{2.0, 4.0, 6.0}, den{1.0, 2.0, 3.0};
    const McEstimate r = estimate_ratio(num, den);
    CHECK(r.mean == 2.0);
    CHECK(r.std_err == 0.0);
  }

  TEST_CASE("no decoherence reproduces the analytic fidelities exactly") {
    RepeaterConfig cfg = table1(2);
    cfg.node.spin_decoherence_rate_hz = 0.0;
    const RepeaterResult analytic = evaluate(cfg);
    const McRun run = simulate_chain(runs(300), cfg, analytic.aggregates);
    const ComparisonReport rep = compare_report(analytic, run.result);
    for (int k = 1; k <= 2; ++k) {
      const ComparisonRow& row = rep.row("F_" + std::to_string(k));
      CHECK(row.mc_mean == Approx(analytic.fidelity_per_level[static_cast<std::size_t>(k)]).epsilon(1e-13));
      REQUIRE(row.z);
      CHECK(*row.z == 0.0);
    }
  }

  TEST_CASE("waiting gap against the half rule") {
    const RepeaterConfig cfg = table1(1);
    const RepeaterResult analytic = evaluate(cfg);
    const McRun run = simulate_chain(runs(2000), cfg, analytic.aggregates);
    const double gap = run.result.waiting_gap_s[0].mean;
    const double t1 = analytic.waiting_time_per_level[0];
    CAPTURE(gap);
    CAPTURE(t1);
    CHECK(std::abs(gap - t1) <= 0.15 * t1);
  }

  TEST_CASE("small decoherence keeps the fidelity within one percent") {
    const RepeaterConfig cfg = table1(2);
    const RepeaterResult analytic = evaluate(cfg);
    const McRun run = simulate_chain(runs(2000), cfg, analytic.aggregates);
    const double f2 = run.result.fidelity_per_level[2].mean;
    CHECK(std::abs(f2 - analytic.final_fidelity()) <= 0.01 * analytic.final_fidelity());
  }

  TEST_CASE("elementary time matches the geometric mean") {
    const RepeaterConfig cfg = table1(2);
    const RepeaterResult analytic = evaluate(cfg);
    const McRun run = simulate_chain(runs(2000), cfg, analytic.aggregates);
    const ComparisonReport rep = compare_report(analytic, run.result);
    const ComparisonRow& row = rep.row("elementary_time_s");
    REQUIRE(row.z);
    CHECK(std::abs(*row.z) <= 3.0);
  }

  TEST_CASE("report") {
    const RepeaterConfig cfg = table1(2);
    const RepeaterResult analytic = evaluate(cfg);

    SUBCASE("identical deterministic inputs give zero z-scores") {
      McResult fake;
      fake.n_levels = 2;
      fake.p0 = analytic.aggregates.p0;
      fake.flyby_s = analytic.aggregates.flyby_s;
      const auto exact = [](double v) { return McEstimate{v, 0.0, 10}; };
      fake.rate_hz = exact(analytic.rate_hz);
      fake.pairs_per_flyby = exact(analytic.pairs_per_flyby);
      fake.elementary_time_s = exact(analytic.elementary_time_s);
      for (double f : analytic.fidelity_per_level) fake.fidelity_per_level.push_back(exact(f));
      for (double t : analytic.waiting_time_per_level) fake.waiting_gap_s.push_back(exact(t));
      const ComparisonReport rep = compare_report(analytic, fake);
      for (const auto& row : rep.rows) {
        REQUIRE(row.z);
        CHECK(*row.z == 0.0);
        CHECK(row.pass);
      }
    }

    SUBCASE("zero tolerance flags sampling noise") {
      const McRun run = simulate_chain(runs(200), cfg, analytic.aggregates);
      const ComparisonReport rep = compare_report(analytic, run.result, CompareTolerances{0.0, 0.0, 0.0});
      CHECK_FALSE(rep.all_pass());
      CHECK_FALSE(rep.row("pairs_per_flyby").pass);
    }

    SUBCASE("mismatched configurations are rejected") {
      const McRun run = simulate_chain(runs(10), table1(1), analytic.aggregates);
      CHECK_THROWS_AS(compare_report(analytic, run.result), ConfigError);
    }

    SUBCASE("json layout") {
      const McRun run = simulate_chain(runs(200), cfg, analytic.aggregates);
      const auto j = nlohmann::json::parse(to_json(compare_report(analytic, run.result), run.result));
      CHECK(j.at("n_levels") == 2);
      CHECK(j.at("trials") == 200);
      CHECK(j.at("stderr_defined") == true);
      REQUIRE(j.at("rows").is_array());
      for (const auto& row : j.at("rows")) {
        for (const char* key : {"quantity", "analytic", "mc_mean", "mc_stderr", "z", "pass"}) {
          CHECK(row.contains(key));
        }
      }
    }

    SUBCASE("one trial leaves the standard error undefined") {
      const McRun run = simulate_chain(runs(1), cfg, analytic.aggregates);
      const ComparisonReport rep = compare_report(analytic, run.result);
      const auto j = nlohmann::json::parse(to_json(rep, run.result));
      CHECK(j.at("stderr_defined") == false);
      CHECK(j.at("rows")[0].at("mc_stderr").is_null());
      CHECK_FALSE(rep.row("pairs_per_flyby").pass);
    }

    SUBCASE("fixed seed reproduces the report") {
      McConfig mc = runs(100, 99);
      mc.threads = 3;
      const McRun a = simulate_chain(mc, cfg, analytic.aggregates);
      mc.threads = 1;
      const McRun b = simulate_chain(mc, cfg, analytic.aggregates);
      CHECK(to_json(compare_report(analytic, a.result), a.result) ==
            to_json(compare_report(analytic, b.result), b.result));
      CHECK(trials_csv(a) == trials_csv(b));
    }
  }

  TEST_CASE("time-resolved attempts") {
    const RepeaterConfig cfg = table1(2);
    const RepeaterResult analytic = evaluate(cfg);
    const FlybyProfile profile = build_profile(cfg.geometry, cfg.channel, cfg.source.pair_fidelity, 2001);
    McConfig mc = runs(300);
    mc.time_model = TimeModel::TimeResolved;
    CHECK_THROWS_AS(simulate_chain(mc, cfg, analytic.aggregates), ConfigError);
    const McRun tr = simulate_chain(mc, cfg, analytic.aggregates, &profile);
    mc.time_model = TimeModel::ConstantP;
    const McRun cp = simulate_chain(mc, cfg, analytic.aggregates);
    CHECK(tr.result.pairs_per_flyby.mean == Approx(cp.result.pairs_per_flyby.mean).epsilon(0.1));
    CHECK(tr.result.time_model == TimeModel::TimeResolved);
  }
}
