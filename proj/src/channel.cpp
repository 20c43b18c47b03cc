// SPDX-License-Identifier: Apache-2.0

#include "losmimo/channel.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

#include "losmimo/errors.hpp"

namespace losmimo::channel {

std::string_view to_string(AmplitudeMode mode) {
  return mode == AmplitudeMode::center ? "center" : "per_element";
}

AmplitudeMode parse_amplitude_mode(std::string_view name) {
  if (name == "center") return AmplitudeMode::center;
  if (name == "per_element") return AmplitudeMode::per_element;
  throw ConfigError("amplitude_mode must be center or per_element (got '" + std::string(name) + "')");
}

void ChannelMatrix::scale(double alpha) {
  for (auto& v : entries_) v *= alpha;
}

double path_gain(double distance_m, double wavelength_m) {
  if (!(distance_m > 0.0)) throw std::domain_error("path_gain: distance must be positive");
  if (!(wavelength_m > 0.0)) throw std::domain_error("path_gain: wavelength must be positive");
  const double amplitude = wavelength_m / (4.0 * std::numbers::pi * distance_m);
  return amplitude * amplitude;
}

ChannelMatrix los_channel(const geometry::ArrayLayout& array, std::span<const Vec3> terminals, AmplitudeMode mode) {
  const double lambda = array.carrier_wavelength;
  const double amp_scale = lambda / (4.0 * std::numbers::pi);
  ChannelMatrix g(array.size(), terminals.size(), lambda);

  for (std::size_t k = 0; k < terminals.size(); ++k) {
    const Vec3& t = terminals[k];
    const double center_amp = amp_scale / distance(array.center, t);
    auto col = g.column(k);
    for (std::size_t m = 0; m < array.size(); ++m) {
      const double d = distance(array.elements[m], t);
      // Reduce the phase argument before the trig call: d/lambda reaches 1e5 at 60 GHz.
      const double cycles = d / lambda;
      const double phase = -2.0 * std::numbers::pi * (cycles - std::floor(cycles));
      const double amp = mode == AmplitudeMode::center ? center_amp : amp_scale / d;
      col[m] = std::polar(amp, phase);
    }
  }
  return g;
}

double noise_power(double bandwidth_hz, double noise_figure_db, double temperature_k) {
  if (!(bandwidth_hz > 0.0)) throw std::domain_error("noise_power: bandwidth must be positive");
  if (!(temperature_k > 0.0)) throw std::domain_error("noise_power: temperature must be positive");
  return kBoltzmann * temperature_k * bandwidth_hz * std::pow(10.0, noise_figure_db / 10.0);
}

NoiseModel make_noise_model(double bandwidth_hz, double noise_figure_db, double temperature_k) {
  return {bandwidth_hz, noise_figure_db, temperature_k, noise_power(bandwidth_hz, noise_figure_db, temperature_k)};
}

}  // namespace losmimo::channel
