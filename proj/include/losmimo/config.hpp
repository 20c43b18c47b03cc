// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "losmimo/channel.hpp"
#include "losmimo/geometry.hpp"

namespace losmimo {

enum class CellLayoutKind { single, seven_cell };

std::string_view to_string(CellLayoutKind layout);

/// Full description of one experiment. Defaults are the 1.9 GHz reference
/// deployment: 18 terminals, 250 m cell, 30 m mast, 2 W / 200 mW, 50 MHz, 9 dB.
struct ScenarioConfig {
  double carrier_frequency = 1.9e9;
  int antennas = 128;
  int terminals = 18;  // per cell
  geometry::ArrayShape array_shape = geometry::ArrayShape::circular;
  int rect_rows = 2;
  double cell_radius = 250.0;
  double bs_height = 30.0;
  double terminal_height = 1.5;
  double dl_power = 2.0;
  double ul_max_power = 0.2;
  double bandwidth = 50e6;
  double noise_figure_bs = 9.0;
  double noise_figure_terminal = 9.0;
  CellLayoutKind layout = CellLayoutKind::single;
  double intersite = 500.0;
  int n_trials = 2000;
  std::uint64_t seed = 1;
  channel::AmplitudeMode amplitude_mode = channel::AmplitudeMode::center;
  int max_antennas = 65536;
  std::string label;

  double wavelength() const { return losmimo::wavelength(carrier_frequency); }

  /// Label used in CSV rows; auto-generated when `label` is empty.
  std::string scenario_name() const;
};

/// Throws ConfigError naming the first violated constraint.
void validate(const ScenarioConfig& cfg);

/// Parses a flat `key = value` document. Blank lines and `#` comments are
/// ignored; values may carry a unit suffix (Hz/kHz/MHz/GHz, m/km/cm/mm,
/// W/mW/kW, dB). Omitted keys keep their defaults; `intersite` defaults to
/// twice the cell radius. Unknown keys, malformed values and invalid
/// configurations raise ConfigError with the line number or key.
ScenarioConfig parse_config(std::string_view text);

/// Applies a single `key = value` assignment on top of `cfg` (no validation).
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Canonical flat text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ScenarioConfig& cfg);

}  // namespace losmimo
