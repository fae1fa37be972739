#pragma once

// Command bodies shared by the command-line tool and the tests. Each returns
// the full text of its output file.

#include "satrep/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace satrep {

struct SweepOptions {
  /// Unset: the scenario's own total distance. Set but empty: no rows.
  std::optional<std::vector<double>> distances_km;
  std::vector<int> levels;          // empty: the scenario's nesting level
  std::vector<double> altitudes_m;  // empty: the scenario's altitude
  bool direct = false;              // append direct-transmission rows
};

std::string flyby_csv(const Scenario& s);
std::string rates_csv(const Scenario& s, const SweepOptions& opts);
std::string sensitivity_csv(const Scenario& s, const std::string& key, const std::vector<std::string>& values,
                            const SweepOptions& opts);

struct McOutput {
  std::string json;
  std::string trials_csv;  // empty unless requested
  bool pass = false;
};
McOutput mc_report(const Scenario& s, bool keep_trials, const CompareTolerances& tol = {});

/// Loading efficiency and reflectivities versus internal cooperativity,
/// log-spaced over [c_min, c_max].
std::string caps_curve_csv(double c_min, double c_max, int points);

/// Element-wise decay map against the Werner decay law for the elementary
/// link state, over [0, t_max_s].
std::string decoherence_csv(const Scenario& s, double t_max_s, int points);

}  // namespace satrep
