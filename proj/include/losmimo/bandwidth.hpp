// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace losmimo::bandwidth {

struct LinkBudgetPoint {
  double bandwidth = 0.0;       // Hz
  double received_power = 0.0;  // W
  double noise_density = 0.0;   // W/Hz
  double capacity = 0.0;        // bit/s
};

/// Shannon-Hartley B log2(1 + P/(B N0)). Throws std::domain_error on non-positive input.
double capacity(double bandwidth_hz, double power_w, double noise_density);

LinkBudgetPoint link_budget(double bandwidth_hz, double power_w, double noise_density);

/// Wideband limit (P/N0) log2(e).
double capacity_limit(double power_w, double noise_density);

/// Power needed for rate R over B: B N0 (2^(R/B) - 1).
double power_for_rate(double bandwidth_hz, double rate_bps, double noise_density);

/// N0 such that `power_w` over `bandwidth_hz` carries exactly `rate_bps`.
double calibrate_noise_density(double bandwidth_hz, double power_w, double rate_bps);

/// B log2(1 + rho0 B0^2 / B^2): throughput when pilot SNR falls off as 1/B^2.
double pilot_limited_throughput(double bandwidth_hz, double reference_snr, double reference_bandwidth_hz);

struct ThroughputPeak {
  double bandwidth = 0.0;
  double throughput = 0.0;
};

/// Maximizer of pilot_limited_throughput by golden-section search over log B.
ThroughputPeak pilot_limited_peak(double reference_snr, double reference_bandwidth_hz);

}  // namespace losmimo::bandwidth
