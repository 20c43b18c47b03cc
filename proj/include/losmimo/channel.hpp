// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "losmimo/geometry.hpp"

namespace losmimo::channel {

using cplx = std::complex<double>;

inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kReferenceTemperature = 290.0;

/// How the Friis amplitude of entry (m, k) is computed.
enum class AmplitudeMode {
  center,       // lambda / (4 pi d_k), d_k from the array center
  per_element,  // lambda / (4 pi d_mk)
};

std::string_view to_string(AmplitudeMode mode);
AmplitudeMode parse_amplitude_mode(std::string_view name);

/// Column-major M x K complex channel; column k is terminal k's response.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  ChannelMatrix(std::size_t rows, std::size_t cols, double carrier_wavelength)
      : rows_(rows), cols_(cols), wavelength_(carrier_wavelength), entries_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double carrier_wavelength() const { return wavelength_; }

  cplx& operator()(std::size_t m, std::size_t k) { return entries_[k * rows_ + m]; }
  const cplx& operator()(std::size_t m, std::size_t k) const { return entries_[k * rows_ + m]; }

  std::span<const cplx> column(std::size_t k) const { return {entries_.data() + k * rows_, rows_}; }
  std::span<cplx> column(std::size_t k) { return {entries_.data() + k * rows_, rows_}; }

  std::span<const cplx> data() const { return entries_; }
  std::span<cplx> data() { return entries_; }

  /// Multiplies every entry by `alpha`.
  void scale(double alpha);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double wavelength_ = 0.0;
  std::vector<cplx> entries_;
};

/// Friis free-space power gain (lambda/(4 pi d))^2 for 0 dBi antennas.
/// Throws std::domain_error if d <= 0 or lambda <= 0.
double path_gain(double distance_m, double wavelength_m);

/// Line-of-sight channel from every array element to every terminal. Phase is
/// -2 pi d_mk / lambda with the exact element-to-terminal distance.
ChannelMatrix los_channel(const geometry::ArrayLayout& array, std::span<const Vec3> terminals,
                          AmplitudeMode mode = AmplitudeMode::center);

inline ChannelMatrix los_channel(const geometry::ArrayLayout& array, const geometry::TerminalPlacement& terminals,
                                 AmplitudeMode mode = AmplitudeMode::center) {
  return los_channel(array, terminals.positions, mode);
}

struct NoiseModel {
  double bandwidth = 0.0;
  double noise_figure_db = 0.0;
  double temperature = kReferenceTemperature;
  double noise_power = 0.0;
};

/// Thermal noise k_B T B scaled by the noise figure, in Watt.
double noise_power(double bandwidth_hz, double noise_figure_db, double temperature_k = kReferenceTemperature);

NoiseModel make_noise_model(double bandwidth_hz, double noise_figure_db,
                            double temperature_k = kReferenceTemperature);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace losmimo::channel
