#include "satrep/scenario.hpp"

#include "satrep/errors.hpp"
#include "satrep/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

namespace satrep {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_number(double v) { return io::number(v); }

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    // Accept integral values written in floating notation, e.g. 1e5.
    const double d = parse_double(key, text);
    if (d != std::floor(d)) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
    return static_cast<long long>(d);
  }
  return v;
}

std::optional<double> parse_optional(const std::string& key, const std::string& text) {
  if (text == "none") return std::nullopt;
  return parse_double(key, text);
}

struct KeySpec {
  std::string name;
  bool numeric;
  std::function<void(Scenario&, const std::string&, const std::string&)> set;
  std::function<std::string(const Scenario&)> get;
};

template <typename Get>
KeySpec number(std::string name, Get ref, double scale = 1.0) {
  return {name, true,
          [ref, scale](Scenario& s, const std::string& key, const std::string& v) {
            ref(s) = parse_double(key, v) * scale;
          },
          [ref, scale](const Scenario& s) { return format_number(ref(const_cast<Scenario&>(s)) / scale); }};
}

template <typename Get>
KeySpec integer(std::string name, Get ref) {
  return {name, true,
          [ref](Scenario& s, const std::string& key, const std::string& v) {
            ref(s) = static_cast<std::remove_reference_t<decltype(ref(s))>>(parse_integer(key, v));
          },
          [ref](const Scenario& s) { return std::to_string(ref(const_cast<Scenario&>(s))); }};
}

template <typename Get>
KeySpec optional_number(std::string name, Get ref) {
  return {name, true,
          [ref](Scenario& s, const std::string& key, const std::string& v) { ref(s) = parse_optional(key, v); },
          [ref](const Scenario& s) {
            const auto& o = ref(const_cast<Scenario&>(s));
            return o ? format_number(*o) : std::string("none");
          }};
}

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    // orbit
    k.push_back(number("orbit.altitude_m", [](Scenario& s) -> double& { return s.repeater.geometry.altitude_m; }));
    k.push_back(
        number("orbit.link_length_m", [](Scenario& s) -> double& { return s.repeater.geometry.link_length_m; }));
    k.push_back(number(
        "orbit.max_zenith_deg", [](Scenario& s) -> double& { return s.repeater.geometry.max_zenith_rad; }, kDeg));
    k.push_back(
        number("orbit.earth_radius_m", [](Scenario& s) -> double& { return s.repeater.geometry.earth_radius_m; }));
    k.push_back(number("orbit.earth_mu_m3_s2", [](Scenario& s) -> double& { return s.repeater.geometry.earth_mu; }));
    // channel
    k.push_back(number("channel.wavelength_m", [](Scenario& s) -> double& { return s.repeater.channel.wavelength_m; }));
    k.push_back(number("channel.beam_waist_m", [](Scenario& s) -> double& { return s.repeater.channel.beam_waist_m; }));
    k.push_back(
        number("channel.beam_quality_m2", [](Scenario& s) -> double& { return s.repeater.channel.beam_quality; }));
    k.push_back(number("channel.receiver_radius_m",
                       [](Scenario& s) -> double& { return s.repeater.channel.receiver_radius_m; }));
    k.push_back(number("channel.pointing_sigma_rad",
                       [](Scenario& s) -> double& { return s.repeater.channel.pointing_sigma_rad; }));
    k.push_back(number("channel.zenith_transmittance",
                       [](Scenario& s) -> double& { return s.repeater.channel.zenith_transmittance; }));
    k.push_back(number("channel.coupling_efficiency",
                       [](Scenario& s) -> double& { return s.repeater.channel.coupling_efficiency; }));
    k.push_back(number("channel.sky_irradiance_w_m2_um_sr",
                       [](Scenario& s) -> double& { return s.repeater.channel.sky_irradiance; }));
    k.push_back({"channel.field_of_view_rad", true,
                 [](Scenario& s, const std::string& key, const std::string& v) {
                   const double angle = parse_double(key, v);
                   if (!(angle >= 0.0 && angle < std::numbers::pi)) {
                     throw ConfigError("key '" + key + "': full field-of-view angle must lie in [0, pi)");
                   }
                   s.repeater.channel.field_of_view_sr = cone_solid_angle(angle);
                 },
                 [](const Scenario& s) {
                   const double omega = s.repeater.channel.field_of_view_sr;
                   return format_number(4.0 * std::asin(std::sqrt(omega / (4.0 * std::numbers::pi))));
                 }});
    k.push_back(number("channel.field_of_view_sr",
                       [](Scenario& s) -> double& { return s.repeater.channel.field_of_view_sr; }));
    k.push_back(number("channel.filter_bandwidth_m",
                       [](Scenario& s) -> double& { return s.repeater.channel.filter_bandwidth_m; }));
    k.push_back(number("channel.coincidence_window_s",
                       [](Scenario& s) -> double& { return s.repeater.channel.coincidence_window_s; }));
    k.push_back({"channel.aperture_interpretation", false,
                 [](Scenario& s, const std::string& key, const std::string& v) {
                   if (v == "literal") {
                     s.repeater.channel.aperture = ApertureInterpretation::Literal;
                   } else if (v == "radius") {
                     s.repeater.channel.aperture = ApertureInterpretation::Radius;
                   } else {
                     throw ConfigError("key '" + key + "': expected 'literal' or 'radius', got '" + v + "'");
                   }
                 },
                 [](const Scenario& s) {
                   return std::string(s.repeater.channel.aperture == ApertureInterpretation::Literal ? "literal"
                                                                                                     : "radius");
                 }});
    // source
    k.push_back(
        number("source.pair_fidelity", [](Scenario& s) -> double& { return s.repeater.source.pair_fidelity; }));
    k.push_back(number("source.repetition_rate_hz",
                       [](Scenario& s) -> double& { return s.repeater.source.repetition_rate_hz; }));
    k.push_back(number("source.direct_repetition_rate_hz",
                       [](Scenario& s) -> double& { return s.repeater.source.direct_repetition_rate_hz; }));
    k.push_back(number("source.emission_efficiency",
                       [](Scenario& s) -> double& { return s.repeater.source.emission_efficiency; }));
    k.push_back(integer("source.mux_channels", [](Scenario& s) -> int& { return s.repeater.source.mux_channels; }));
    k.push_back(
        number("source.demux_efficiency", [](Scenario& s) -> double& { return s.repeater.source.demux_efficiency; }));
    // node
    k.push_back(optional_number("node.caps_efficiency", [](Scenario& s) -> std::optional<double>& {
      return s.repeater.node.caps_efficiency;
    }));
    k.push_back(optional_number("node.internal_cooperativity", [](Scenario& s) -> std::optional<double>& {
      return s.repeater.node.internal_cooperativity;
    }));
    k.push_back(number("node.caps_fidelity", [](Scenario& s) -> double& { return s.repeater.node.caps_fidelity; }));
    k.push_back(
        number("node.rydberg_fidelity", [](Scenario& s) -> double& { return s.repeater.node.rydberg_fidelity; }));
    k.push_back(
        number("node.readout_fidelity", [](Scenario& s) -> double& { return s.repeater.node.readout_fidelity; }));
    k.push_back(number("node.detection_efficiency",
                       [](Scenario& s) -> double& { return s.repeater.node.detection_efficiency; }));
    k.push_back(number("node.spin_decoherence_rate_hz",
                       [](Scenario& s) -> double& { return s.repeater.node.spin_decoherence_rate_hz; }));
    // repeater
    k.push_back(integer("repeater.nesting_levels", [](Scenario& s) -> int& { return s.repeater.n_levels; }));
    k.push_back(number("repeater.gate_efficiency", [](Scenario& s) -> double& { return s.repeater.gate_efficiency; }));
    k.push_back(
        integer("repeater.detector_exponent", [](Scenario& s) -> int& { return s.repeater.detector_exponent; }));
    // mc
    k.push_back(integer("mc.trials", [](Scenario& s) -> std::uint64_t& { return s.mc.trials; }));
    k.push_back(integer("mc.seed", [](Scenario& s) -> std::uint64_t& { return s.mc.seed; }));
    k.push_back({"mc.time_model", false,
                 [](Scenario& s, const std::string&, const std::string& v) { s.mc.time_model = parse_time_model(v); },
                 [](const Scenario& s) { return to_string(s.mc.time_model); }});
    k.push_back(integer("mc.threads", [](Scenario& s) -> unsigned& { return s.mc.threads; }));
    // quadrature
    k.push_back(integer("quadrature.samples", [](Scenario& s) -> int& { return s.quadrature.samples; }));
    k.push_back(number("quadrature.rel_tol", [](Scenario& s) -> double& { return s.quadrature.rel_tol; }));
    k.push_back(integer("quadrature.max_doublings", [](Scenario& s) -> int& { return s.quadrature.max_doublings; }));
    return k;
  }();
  return keys;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& spec : registry()) {
    if (spec.name == key) return &spec;
  }
  return nullptr;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

Scenario default_scenario() { return Scenario{}; }

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& spec : registry()) out.push_back(spec.name);
  return out;
}

std::vector<std::string> sweepable_keys() {
  std::vector<std::string> out;
  for (const auto& spec : registry()) {
    if (spec.numeric && spec.name.rfind("mc.", 0) != 0 && spec.name.rfind("quadrature.", 0) != 0) {
      out.push_back(spec.name);
    }
  }
  return out;
}

std::string suggest_key(const std::string& unknown) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& spec : registry()) {
    const std::size_t d = edit_distance(unknown, spec.name);
    if (d < best_d) {
      best_d = d;
      best = spec.name;
    }
  }
  return best;
}

void set_value(Scenario& s, const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(key);
  if (!spec) {
    throw ConfigError("unknown key '" + key + "' (did you mean '" + suggest_key(key) + "'?)");
  }
  spec->set(s, key, value);
}

void apply_override(Scenario& s, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form section.key=value");
  }
  set_value(s, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
  Scenario s = default_scenario();
  std::string section;
  std::vector<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  const auto where = [&] { return origin + ":" + std::to_string(line_no) + ": "; };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    const std::string line = trim(std::string_view(raw).substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected key = value");
    if (section.empty()) throw ConfigError(where() + "key outside of any [section]");
    const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError(where() + "duplicate key '" + key + "'");
    }
    seen.push_back(key);
    try {
      set_value(s, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  const auto has = [&](const char* k) { return std::find(seen.begin(), seen.end(), k) != seen.end(); };
  if (has("channel.field_of_view_rad") && has("channel.field_of_view_sr")) {
    throw ConfigError(origin + ": set only one of channel.field_of_view_rad and channel.field_of_view_sr");
  }
  if (has("node.internal_cooperativity") && !has("node.caps_efficiency")) {
    // A cooperativity on its own defines the loading efficiency.
    s.repeater.node.caps_efficiency.reset();
  }
  resolved_caps_efficiency(s.repeater.node, &s.warnings);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> resolved_parameters(const Scenario& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& spec : registry()) out.emplace_back(spec.name, spec.get(s));
  return out;
}

std::string provenance_line(const Scenario& s, const std::string& command) {
  std::string line = "# satrep " + command;
  for (const auto& [k, v] : resolved_parameters(s)) line += "; " + k + "=" + v;
  return line;
}

}  // namespace satrep
