#include "satrep/commands.hpp"
#include "satrep/errors.hpp"
#include "satrep/io.hpp"
#include "satrep/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kModel = 2, kAcceptance = 3 };

void emit(const std::string& output, const std::string& content) {
  if (output.empty() || output == "-") {
    std::cout << content;
  } else {
    satrep::io::write_atomic(output, content);
  }
}

std::vector<int> to_levels(const std::vector<double>& links) {
  std::vector<int> levels;
  for (double l : links) {
    int n = 0;
    while ((1 << n) < l && n < 30) ++n;
    if ((1 << n) != l) throw satrep::ConfigError("link count must be a power of two, got " + satrep::io::number(l));
    levels.push_back(n);
  }
  return levels;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite-assisted quantum repeater rates, fidelities and Monte Carlo checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  bool dump_config = false;
  app.add_option("--config", config_path, "Scenario file (default: built-in Table I parameters)");
  app.add_option("--output,-o", output, "Output file (default: standard output)");
  app.add_option("--set", overrides, "Override one key, e.g. --set node.spin_decoherence_rate_hz=1");
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--trials", trials, "Monte Carlo trial count");
  app.add_flag("--dump-config", dump_config, "Print the resolved parameters to standard error");

  std::string distances_text;
  std::string links_text;
  std::string altitudes_text;
  bool direct = false;
  const auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--distances-km", distances_text, "Comma-separated total distances in km (may be empty)");
    sub->add_option("--links", links_text, "Comma-separated link counts (powers of two)");
    sub->add_option("--altitudes-m", altitudes_text, "Comma-separated satellite altitudes in m");
    sub->add_flag("--direct", direct, "Append direct-transmission rows");
  };

  auto* flyby = app.add_subcommand("flyby", "Time profile of one flyby");
  auto* rates = app.add_subcommand("rates", "Pairs per flyby and fidelity over a distance grid");
  add_grid(rates);
  auto* sens = app.add_subcommand("sensitivity", "Repeat the rates sweep for several values of one key");
  std::string param;
  std::string values_text;
  sens->add_option("--param", param, "Key to vary, e.g. source.pair_fidelity")->required();
  sens->add_option("--values", values_text, "Comma-separated values")->required();
  add_grid(sens);
  auto* mc = app.add_subcommand("mc", "Monte Carlo check of the analytic rates and fidelities");
  std::string dump_trials;
  mc->add_option("--dump-trials", dump_trials, "Also write per-trial records to this CSV file");
  auto* caps = app.add_subcommand("caps-curve", "CAPS loading efficiency versus internal cooperativity");
  double c_min = 1.0, c_max = 1e4;
  int points = 81;
  caps->add_option("--c-min", c_min, "Smallest cooperativity");
  caps->add_option("--c-max", c_max, "Largest cooperativity");
  caps->add_option("--points", points, "Number of log-spaced points");
  auto* deco = app.add_subcommand("decoherence", "Element-wise decay map against the Werner decay law");
  double t_max = 20.0;
  int deco_points = 101;
  deco->add_option("--t-max-s", t_max, "Longest storage time");
  deco->add_option("--points", deco_points, "Number of time points");
  app.add_subcommand("keys", "List every configuration key and whether it can be swept");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("keys")) {
      const auto sweepable = satrep::sweepable_keys();
      for (const auto& k : satrep::known_keys()) {
        const bool s = std::find(sweepable.begin(), sweepable.end(), k) != sweepable.end();
        std::cout << k << (s ? "  (sweepable)" : "") << '\n';
      }
      return kOk;
    }

    satrep::Scenario scenario =
        config_path.empty() ? satrep::default_scenario() : satrep::load_scenario(config_path);
    for (const auto& o : overrides) satrep::apply_override(scenario, o);
    if (seed) scenario.mc.seed = *seed;
    if (trials) scenario.mc.trials = *trials;
    for (const auto& w : scenario.warnings) std::cerr << "warning: " << w << '\n';
    if (dump_config) {
      for (const auto& [k, v] : satrep::resolved_parameters(scenario)) std::cerr << k << " = " << v << '\n';
    }

    satrep::SweepOptions grid;
    const auto fill_grid = [&](CLI::App* sub) {
      if (sub->count("--distances-km")) grid.distances_km = satrep::io::parse_list(distances_text);
      if (!links_text.empty()) grid.levels = to_levels(satrep::io::parse_list(links_text));
      if (!altitudes_text.empty()) grid.altitudes_m = satrep::io::parse_list(altitudes_text);
      grid.direct = direct;
    };

    if (flyby->parsed()) {
      const std::string csv = satrep::flyby_csv(scenario);
      emit(output, csv);
      if (!output.empty() && output != "-") {
        // Second comment line holds the summary.
        const auto a = csv.find('\n') + 1;
        std::cout << csv.substr(a + 2, csv.find('\n', a) - a - 2) << '\n';
      }
    } else if (rates->parsed()) {
      fill_grid(rates);
      emit(output, satrep::rates_csv(scenario, grid));
    } else if (sens->parsed()) {
      fill_grid(sens);
      std::vector<std::string> values;
      for (double v : satrep::io::parse_list(values_text)) values.push_back(satrep::io::number(v));
      emit(output, satrep::sensitivity_csv(scenario, param, values, grid));
    } else if (mc->parsed()) {
      const satrep::McOutput report = satrep::mc_report(scenario, !dump_trials.empty());
      emit(output, report.json);
      if (!dump_trials.empty()) satrep::io::write_atomic(dump_trials, report.trials_csv);
      if (!report.pass) {
        std::cerr << "Monte Carlo comparison failed; see the report rows with \"pass\": false\n";
        return kAcceptance;
      }
    } else if (caps->parsed()) {
      emit(output, satrep::caps_curve_csv(c_min, c_max, points));
    } else if (deco->parsed()) {
      emit(output, satrep::decoherence_csv(scenario, t_max, deco_points));
    }
  } catch (const satrep::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const satrep::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const satrep::QuadratureError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  }
  return kOk;
}
