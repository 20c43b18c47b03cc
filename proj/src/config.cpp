// SPDX-License-Identifier: Apache-2.0

#include "losmimo/config.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "losmimo/errors.hpp"

namespace losmimo {

std::string_view to_string(CellLayoutKind layout) {
  return layout == CellLayoutKind::single ? "single" : "seven_cell";
}

namespace {

enum class Dim { frequency, length, power, decibel, integer, seed, text };

struct Key {
  Dim dim;
  std::string_view canonical;
};

const std::map<std::string_view, Key>& keys() {
  static const std::map<std::string_view, Key> table = {
      {"carrier_frequency", {Dim::frequency, "carrier_frequency"}},
      {"M", {Dim::integer, "M"}},
      {"antennas", {Dim::integer, "M"}},
      {"K", {Dim::integer, "K"}},
      {"terminals", {Dim::integer, "K"}},
      {"array_shape", {Dim::text, "array_shape"}},
      {"rect_rows", {Dim::integer, "rect_rows"}},
      {"cell_radius", {Dim::length, "cell_radius"}},
      {"bs_height", {Dim::length, "bs_height"}},
      {"terminal_height", {Dim::length, "terminal_height"}},
      {"P_dl", {Dim::power, "P_dl"}},
      {"P_ul_max", {Dim::power, "P_ul_max"}},
      {"bandwidth", {Dim::frequency, "bandwidth"}},
      {"noise_figure_bs", {Dim::decibel, "noise_figure_bs"}},
      {"noise_figure_terminal", {Dim::decibel, "noise_figure_terminal"}},
      {"layout", {Dim::text, "layout"}},
      {"intersite", {Dim::length, "intersite"}},
      {"n_trials", {Dim::integer, "n_trials"}},
      {"seed", {Dim::seed, "seed"}},
      {"amplitude_mode", {Dim::text, "amplitude_mode"}},
      {"max_antennas", {Dim::integer, "max_antennas"}},
      {"label", {Dim::text, "label"}},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double unit_scale(Dim dim, std::string_view unit, std::string_view key) {
  static const std::map<std::string_view, double> frequency = {
      {"", 1.0}, {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
  static const std::map<std::string_view, double> length = {
      {"", 1.0}, {"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}, {"mm", 1e-3}};
  static const std::map<std::string_view, double> power = {{"", 1.0}, {"W", 1.0}, {"mW", 1e-3}, {"kW", 1e3}};
  static const std::map<std::string_view, double> decibel = {{"", 1.0}, {"dB", 1.0}};
  const std::map<std::string_view, double>* table = nullptr;
  switch (dim) {
    case Dim::frequency: table = &frequency; break;
    case Dim::length: table = &length; break;
    case Dim::power: table = &power; break;
    case Dim::decibel: table = &decibel; break;
    default: break;
  }
  if (table != nullptr) {
    if (auto it = table->find(unit); it != table->end()) return it->second;
  } else if (unit.empty()) {
    return 1.0;
  }
  throw ConfigError("key '" + std::string(key) + "': unit '" + std::string(unit) + "' not valid here");
}

double parse_quantity(Dim dim, std::string_view value, std::string_view key) {
  double number = 0.0;
  const auto* begin = value.data();
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc() || ptr == begin)
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(value) + "'");
  const auto unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  return number * unit_scale(dim, unit, key);
}

template <typename Int>
Int parse_integer(std::string_view value, std::string_view key) {
  Int v{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(value) + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ScenarioConfig::scenario_name() const {
  if (!label.empty()) return label;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%gGHz_M%d_%s_%s", carrier_frequency / 1e9, antennas,
                std::string(geometry::to_string(array_shape)).c_str(), std::string(to_string(layout)).c_str());
  return buf;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = keys().find(key);
  if (it == keys().end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  const Key& k = it->second;
  const std::string_view name = k.canonical;
  value = trim(value);
  if (value.empty()) throw ConfigError("key '" + std::string(key) + "': missing value");

  switch (k.dim) {
    case Dim::integer: {
      const int v = parse_integer<int>(value, key);
      if (name == "M") cfg.antennas = v;
      else if (name == "K") cfg.terminals = v;
      else if (name == "rect_rows") cfg.rect_rows = v;
      else if (name == "n_trials") cfg.n_trials = v;
      else if (name == "max_antennas") cfg.max_antennas = v;
      return;
    }
    case Dim::seed:
      cfg.seed = parse_integer<std::uint64_t>(value, key);
      return;
    case Dim::text:
      if (name == "array_shape") cfg.array_shape = geometry::parse_shape(value);
      else if (name == "amplitude_mode") cfg.amplitude_mode = channel::parse_amplitude_mode(value);
      else if (name == "label") cfg.label = std::string(value);
      else if (name == "layout") {
        if (value == "single") cfg.layout = CellLayoutKind::single;
        else if (value == "seven_cell") cfg.layout = CellLayoutKind::seven_cell;
        else throw ConfigError("layout must be single or seven_cell (got '" + std::string(value) + "')");
      }
      return;
    default: {
      const double v = parse_quantity(k.dim, value, key);
      if (name == "carrier_frequency") cfg.carrier_frequency = v;
      else if (name == "cell_radius") cfg.cell_radius = v;
      else if (name == "bs_height") cfg.bs_height = v;
      else if (name == "terminal_height") cfg.terminal_height = v;
      else if (name == "P_dl") cfg.dl_power = v;
      else if (name == "P_ul_max") cfg.ul_max_power = v;
      else if (name == "bandwidth") cfg.bandwidth = v;
      else if (name == "noise_figure_bs") cfg.noise_figure_bs = v;
      else if (name == "noise_figure_terminal") cfg.noise_figure_terminal = v;
      else if (name == "intersite") cfg.intersite = v;
      return;
    }
  }
}

void validate(const ScenarioConfig& cfg) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid configuration: " + what);
  };
  require(cfg.carrier_frequency > 0.0, "carrier_frequency must be > 0");
  require(cfg.terminals >= 1, "K must be >= 1");
  require(cfg.antennas >= 1, "M must be >= 1");
  require(cfg.antennas >= cfg.terminals, "zero-forcing needs M >= K");
  require(cfg.rect_rows >= 0, "rect_rows must be >= 0");
  require(cfg.array_shape != geometry::ArrayShape::rectangular || cfg.rect_rows == 0 ||
              cfg.antennas % cfg.rect_rows == 0,
          "rectangular array needs rect_rows to divide M");
  require(cfg.cell_radius > 0.0, "cell_radius must be > 0");
  require(cfg.bs_height > 0.0, "bs_height must be > 0");
  require(cfg.terminal_height >= 0.0, "terminal_height must be >= 0");
  require(cfg.bs_height != cfg.terminal_height, "bs_height must differ from terminal_height");
  require(cfg.dl_power > 0.0, "P_dl must be > 0");
  require(cfg.ul_max_power > 0.0, "P_ul_max must be > 0");
  require(cfg.bandwidth > 0.0, "bandwidth must be > 0");
  require(cfg.intersite > 0.0, "intersite must be > 0");
  require(cfg.n_trials >= 1, "n_trials must be >= 1");
  require(cfg.max_antennas >= cfg.terminals, "max_antennas must be >= K");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  bool intersite_given = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (key == "intersite") intersite_given = true;
  }
  if (!intersite_given) cfg.intersite = 2.0 * cfg.cell_radius;
  validate(cfg);
  return cfg;
}

std::string to_config_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "carrier_frequency = " << format_double(cfg.carrier_frequency) << " Hz\n"
     << "M = " << cfg.antennas << "\n"
     << "K = " << cfg.terminals << "\n"
     << "array_shape = " << geometry::to_string(cfg.array_shape) << "\n"
     << "rect_rows = " << cfg.rect_rows << "\n"
     << "cell_radius = " << format_double(cfg.cell_radius) << " m\n"
     << "bs_height = " << format_double(cfg.bs_height) << " m\n"
     << "terminal_height = " << format_double(cfg.terminal_height) << " m\n"
     << "P_dl = " << format_double(cfg.dl_power) << " W\n"
     << "P_ul_max = " << format_double(cfg.ul_max_power) << " W\n"
     << "bandwidth = " << format_double(cfg.bandwidth) << " Hz\n"
     << "noise_figure_bs = " << format_double(cfg.noise_figure_bs) << " dB\n"
     << "noise_figure_terminal = " << format_double(cfg.noise_figure_terminal) << " dB\n"
     << "layout = " << to_string(cfg.layout) << "\n"
     << "intersite = " << format_double(cfg.intersite) << " m\n"
     << "n_trials = " << cfg.n_trials << "\n"
     << "seed = " << cfg.seed << "\n"
     << "amplitude_mode = " << channel::to_string(cfg.amplitude_mode) << "\n"
     << "max_antennas = " << cfg.max_antennas << "\n";
  if (!cfg.label.empty()) os << "label = " << cfg.label << "\n";
  return os.str();
}

}  // namespace losmimo
