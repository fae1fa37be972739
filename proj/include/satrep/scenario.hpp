#pragma once

// Scenario files: plain text, `[section]` headers followed by `key = value`
// lines, `#` or `;` comments. Keys carry their unit in the name. Unknown keys
// are rejected with the closest known key as a suggestion.

#include "satrep/flyby.hpp"
#include "satrep/mc.hpp"
#include "satrep/repeater.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace satrep {

struct Scenario {
  RepeaterConfig repeater;
  McConfig mc;
  QuadratureOptions quadrature;
  std::vector<std::string> warnings;
};

/// Built-in parameter set; identical to configs/table1.cfg.
Scenario default_scenario();

Scenario parse_scenario(std::string_view text, const std::string& origin = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Sets one fully qualified key, e.g. ("node.spin_decoherence_rate_hz", "1.0").
void set_value(Scenario& s, const std::string& key, const std::string& value);
/// Applies a `section.key=value` override.
void apply_override(Scenario& s, std::string_view assignment);

std::vector<std::string> known_keys();
/// Numeric keys that the sensitivity command may vary.
std::vector<std::string> sweepable_keys();
std::string suggest_key(const std::string& unknown);

/// Fully resolved parameter set as `key=value` pairs, in registry order.
std::vector<std::pair<std::string, std::string>> resolved_parameters(const Scenario& s);
/// The same, rendered as one `# key=value; ...` comment line (no newline).
std::string provenance_line(const Scenario& s, const std::string& command);

}  // namespace satrep
