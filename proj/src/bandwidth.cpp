// SPDX-License-Identifier: Apache-2.0

#include "losmimo/bandwidth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace losmimo::bandwidth {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string("bandwidth: ") + what + " must be positive");
}

}  // namespace

double capacity(double bandwidth_hz, double power_w, double noise_density) {
  require_positive(bandwidth_hz, "bandwidth");
  require_positive(power_w, "power");
  require_positive(noise_density, "noise density");
  return bandwidth_hz * std::log1p(power_w / (bandwidth_hz * noise_density)) / std::numbers::ln2;
}

LinkBudgetPoint link_budget(double bandwidth_hz, double power_w, double noise_density) {
  return {bandwidth_hz, power_w, noise_density, capacity(bandwidth_hz, power_w, noise_density)};
}

double capacity_limit(double power_w, double noise_density) {
  require_positive(power_w, "power");
  require_positive(noise_density, "noise density");
  return power_w / noise_density * std::numbers::log2e;
}

double power_for_rate(double bandwidth_hz, double rate_bps, double noise_density) {
  require_positive(bandwidth_hz, "bandwidth");
  require_positive(noise_density, "noise density");
  if (rate_bps < 0.0) throw std::domain_error("bandwidth: rate must be non-negative");
  return bandwidth_hz * noise_density * std::expm1(rate_bps / bandwidth_hz * std::numbers::ln2);
}

double calibrate_noise_density(double bandwidth_hz, double power_w, double rate_bps) {
  require_positive(bandwidth_hz, "bandwidth");
  require_positive(power_w, "power");
  require_positive(rate_bps, "rate");
  return power_w / (bandwidth_hz * std::expm1(rate_bps / bandwidth_hz * std::numbers::ln2));
}

double pilot_limited_throughput(double bandwidth_hz, double reference_snr, double reference_bandwidth_hz) {
  require_positive(bandwidth_hz, "bandwidth");
  require_positive(reference_snr, "reference SNR");
  require_positive(reference_bandwidth_hz, "reference bandwidth");
  const double ratio = reference_bandwidth_hz / bandwidth_hz;
  return bandwidth_hz * std::log1p(reference_snr * ratio * ratio) / std::numbers::ln2;
}

ThroughputPeak pilot_limited_peak(double reference_snr, double reference_bandwidth_hz) {
  // In x = B/B0 the objective is B0 x log2(1 + rho0/x^2), unimodal with its
  // peak near sqrt(rho0); bracket generously in log x and shrink.
  auto f = [&](double log_b) { return pilot_limited_throughput(std::exp(log_b), reference_snr, reference_bandwidth_hz); };
  const double center = std::log(reference_bandwidth_hz) + 0.5 * std::log(reference_snr);
  double a = center - 20.0;
  double b = center + 20.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double best = 0.5 * (a + b);
  return {std::exp(best), f(best)};
}

}  // namespace losmimo::bandwidth
