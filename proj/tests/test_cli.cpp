#include "satrep/commands.hpp"
#include "satrep/errors.hpp"
#include "satrep/io.hpp"
#include "satrep/scenario.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace satrep;
namespace fs = std::filesystem;

namespace {

const fs::path kTable1 = fs::path(SATREP_SOURCE_DIR) / "configs" / "table1.cfg";

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("satrep_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd =
      std::string(SATREP_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bundled scenario matches the built-in defaults") {
    const Scenario file = load_scenario(kTable1);
    CHECK(resolved_parameters(file) == resolved_parameters(default_scenario()));
    CHECK(file.warnings.empty());
    // every key is present in the bundled file
    const std::string text = slurp(kTable1);
    for (const auto& key : known_keys()) {
      const std::string leaf = key.substr(key.find('.') + 1);
      if (leaf == "field_of_view_sr") continue;
      CHECK_MESSAGE(text.find(leaf + " =") != std::string::npos, key);
    }
  }

  TEST_CASE("strict parsing") {
    CHECK_THROWS_WITH_AS(parse_scenario("[node]\nspin_decoherence_rate = 1\n"),
                         doctest::Contains("node.spin_decoherence_rate_hz"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[node]\ncaps_fidelity = 0.9\ncaps_fidelity = 0.8\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("caps_fidelity = 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[node\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[source]\nmux_channels = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[source]\npair_fidelity = high\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[channel]\nfield_of_view_rad = 1e-4\nfield_of_view_sr = 1e-8\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[mc]\ntime_model = hourly\n"), ConfigError);
  }

  TEST_CASE("values and overrides") {
    Scenario s = parse_scenario("[orbit]\naltitude_m = 1000e3  # lower\n[channel]\nfield_of_view_sr = 1e-4\n");
    CHECK(s.repeater.geometry.altitude_m == 1e6);
    CHECK(s.repeater.channel.field_of_view_sr == 1e-4);
    apply_override(s, "node.spin_decoherence_rate_hz = 1");
    CHECK(s.repeater.node.spin_decoherence_rate_hz == 1.0);
    CHECK_THROWS_AS(apply_override(s, "node.spin_decoherence_rate_hz"), ConfigError);
    CHECK_THROWS_AS(apply_override(s, "node.nope=1"), ConfigError);

    const Scenario coop = parse_scenario("[node]\ninternal_cooperativity = 96.4974226119286\n");
    CHECK_FALSE(coop.repeater.node.caps_efficiency.has_value());
    CHECK(resolved_caps_efficiency(coop.repeater.node) == doctest::Approx(0.75).epsilon(1e-12));
    const Scenario both = parse_scenario("[node]\ninternal_cooperativity = 10\ncaps_efficiency = 0.75\n");
    CHECK(both.warnings.size() == 1);
  }

  TEST_CASE("flyby output") {
    Scenario s = default_scenario();
    s.repeater.geometry.link_length_m = 2.0e6;
    const std::string csv = flyby_csv(s);
    CHECK(csv == flyby_csv(s));
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 3 + 2001);
    CHECK(rows[0].rfind("# satrep flyby; ", 0) == 0);
    CHECK(rows[2] == "t_s,d_m,zenith_rad,eta_tr,eta2_tr,f_pair");
    const auto eta2 = [&](std::size_t i) {
      std::string r = rows[3 + i];
      for (int k = 0; k < 4; ++k) r = r.substr(r.find(',') + 1);
      return std::stod(r.substr(0, r.find(',')));
    };
    std::size_t peak = 0;
    for (std::size_t i = 0; i < 2001; ++i) {
      if (eta2(i) > eta2(peak)) peak = i;
    }
    CHECK(peak == 1000);
    CHECK(eta2(10) == doctest::Approx(eta2(1990)).epsilon(1e-9));

    Scenario low = s;
    low.repeater.geometry.altitude_m = 5e5;
    const auto flyby_time = [](const Scenario& sc) {
      return flyby_aggregates(sc.repeater.geometry, sc.repeater.channel, 0.998).flyby_s;
    };
    CHECK(flyby_time(low) < flyby_time(s));
  }

  TEST_CASE("rates output") {
    const Scenario s = default_scenario();
    SweepOptions empty;
    empty.distances_km = std::vector<double>{};
    const auto header_only = lines(rates_csv(s, empty));
    REQUIRE(header_only.size() == 2);
    CHECK(header_only[1] ==
          "L_total_km,n_levels,h_km,L0_km,T_FB_s,P0,F_pair_avg,rate_hz,pairs_per_flyby,fidelity_final,F0,F1,F2,"
          "scheme,status");

    SweepOptions grid;
    grid.distances_km = std::vector<double>{10000, 40000};
    grid.levels = {2, 3};
    grid.direct = true;
    const auto rows = lines(rates_csv(s, grid));
    REQUIRE(rows.size() == 2 + 6);
    CHECK(rows[2].find(",repeater,ok") != std::string::npos);
    CHECK(rows[3].find(",repeater,no_visibility") != std::string::npos);
    CHECK(rows[7].find(",direct,no_visibility") != std::string::npos);
  }

  TEST_CASE("sensitivity output") {
    const Scenario s = default_scenario();
    SweepOptions grid;
    grid.distances_km = std::vector<double>{10000, 20000};
    const auto rates = lines(rates_csv(s, grid));
    const auto single = lines(sensitivity_csv(s, "node.spin_decoherence_rate_hz", {"0.05"}, grid));
    REQUIRE(single.size() == rates.size());
    for (std::size_t i = 2; i < rates.size(); ++i) {
      CHECK(single[i] == "node.spin_decoherence_rate_hz,0.05," + rates[i]);
    }
    CHECK_THROWS_WITH_AS(sensitivity_csv(s, "mc.seed", {"1"}, grid), doctest::Contains("source.pair_fidelity"),
                         ConfigError);

    // the 8-link chain loses the most when the source degrades
    std::vector<double> loss;
    for (int n : {1, 2, 3}) {
      Scenario hi = s, lo = s;
      hi.repeater.n_levels = lo.repeater.n_levels = n;
      hi.repeater.geometry.link_length_m = lo.repeater.geometry.link_length_m = 1.0e7 / (1 << n);
      lo.repeater.source.pair_fidelity = 0.99;
      loss.push_back(evaluate(hi.repeater).final_fidelity() - evaluate(lo.repeater).final_fidelity());
    }
    CHECK(loss[2] > loss[1]);
    CHECK(loss[1] > loss[0]);
  }

  TEST_CASE("command line") {
    SUBCASE("usage errors") {
      CHECK(run("").code == 1);
      CHECK(run("rates --bogus").code == 1);
      const Run typo = run("--set orbit.altitude=1 rates");
      CHECK(typo.code == 1);
      CHECK(typo.err.find("orbit.altitude_m") != std::string::npos);
      const Run sens = run("sensitivity --param source.nope --values 1");
      CHECK(sens.code == 1);
      CHECK(sens.err.find("node.spin_decoherence_rate_hz") != std::string::npos);
    }
    SUBCASE("model errors") {
      const Run r = run("--set orbit.link_length_m=2e7 flyby");
      CHECK(r.code == 2);
      CHECK(r.err.find("visib") != std::string::npos);
      CHECK(run("--set node.caps_fidelity=1.5 rates").code == 2);
    }
    SUBCASE("flyby writes a file and a summary") {
      const fs::path out = scratch() / "flyby.csv";
      const Run r = run("--config " + kTable1.string() + " flyby --output " + out.string());
      CHECK(r.code == 0);
      CHECK(r.out.find("P0=") != std::string::npos);
      const std::string first = slurp(out);
      CHECK(run("--config " + kTable1.string() + " flyby --output " + out.string()).code == 0);
      CHECK(slurp(out) == first);
      for (const auto& entry : fs::directory_iterator(scratch())) {
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
      }
    }
    SUBCASE("empty grid") {
      const Run r = run("rates --distances-km ''");
      CHECK(r.code == 0);
      CHECK(lines(r.out).size() == 2);
    }
    SUBCASE("caps curve") {
      const Run r = run("caps-curve --c-min 1 --c-max 1000 --points 4");
      CHECK(r.code == 0);
      CHECK(lines(r.out).size() == 2 + 4);
    }
    SUBCASE("monte carlo report") {
      const fs::path a = scratch() / "a.json";
      const fs::path b = scratch() / "b.json";
      const fs::path dump = scratch() / "trials.csv";
      const std::string args = " --trials 50 --seed 5 mc --dump-trials " + dump.string() + " --output ";
      const Run ra = run(args + a.string());
      const Run rb = run(args + b.string());
      CHECK(ra.code == rb.code);
      CHECK((ra.code == 0 || ra.code == 3));
      CHECK(slurp(a) == slurp(b));
      CHECK(lines(slurp(dump)).size() == 2 + 50);
      const auto j = nlohmann::json::parse(slurp(a));
      CHECK(j.at("trials") == 50);
      CHECK(j.at("pass") == (ra.code == 0));

      const Run one = run("--trials 1 mc");
      CHECK(one.code == 3);
      CHECK(nlohmann::json::parse(one.out).at("stderr_defined") == false);
    }
  }
}
