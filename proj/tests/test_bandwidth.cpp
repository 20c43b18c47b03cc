// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "losmimo/bandwidth.hpp"

using namespace losmimo::bandwidth;

namespace {
constexpr double kRefB = 20e6;
constexpr double kRefP = 10.0;
constexpr double kRefR = 60e6;
}  // namespace

TEST_CASE("anchor point") {
  // SNR 7 over 20 MHz carries exactly 3 bit/s/Hz
  const double n0 = kRefP / (7.0 * kRefB);
  CHECK(capacity(kRefB, kRefP, n0) == doctest::Approx(60e6).epsilon(1e-12));
  CHECK(calibrate_noise_density(kRefB, kRefP, kRefR) == doctest::Approx(n0).epsilon(1e-12));
  const auto pt = link_budget(kRefB, kRefP, n0);
  CHECK(pt.capacity == doctest::Approx(60e6).epsilon(1e-12));
  CHECK(pt.noise_density == n0);
}

TEST_CASE("wideband limit and scaling") {
  const double n0 = calibrate_noise_density(kRefB, kRefP, kRefR);
  CHECK(capacity(1e6 * kRefB, kRefP, n0) == doctest::Approx(capacity_limit(kRefP, n0)).epsilon(1e-4));
  CHECK(capacity_limit(kRefP, n0) == doctest::Approx(kRefP / n0 / std::numbers::ln2));
  CHECK(capacity(50 * kRefB, 50 * kRefP, n0) == doctest::Approx(50 * capacity(kRefB, kRefP, n0)).epsilon(1e-14));
  CHECK(50 * kRefP == 500.0);
}

TEST_CASE("required powers") {
  const double n0 = calibrate_noise_density(kRefB, kRefP, kRefR);
  CHECK(power_for_rate(1e9, 25 * kRefR, n0) == doctest::Approx(131.0).epsilon(0.01));
  CHECK(power_for_rate(50 * kRefB, 50 * kRefR, n0) == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(power_for_rate(1e9, 1e-6, n0) < 1e-12);
  for (double b : {1e5, 2e7, 1e9, 1e11}) {
    for (double p : {1e-3, 1.0, 300.0}) {
      const double c = capacity(b, p, n0);
      CHECK(power_for_rate(b, c, n0) == doctest::Approx(p).epsilon(1e-9));
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(capacity(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(capacity(1.0, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(capacity(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("capacity properties over twelve decades") {
  const double n0 = calibrate_noise_density(kRefB, kRefP, kRefR);
  const double limit = capacity_limit(kRefP, n0);
  double previous = 0.0;
  for (double e = 0.0; e <= 12.0; e += 0.125) {
    const double b = std::pow(10.0, e);
    const double c = capacity(b, kRefP, n0);
    CHECK(c < limit);
    CHECK(c > previous);
    // equal-width steps: strictly concave in B
    const double h = b / 4;
    CHECK(capacity(b + h, kRefP, n0) - c < c - capacity(b - h, kRefP, n0));
    // doubling B gains less each time once the SNR is at most 0 dB
    if (kRefP / (b * n0) <= 1.0) CHECK(capacity(2 * b, kRefP, n0) - c < c - capacity(b / 2, kRefP, n0));
    previous = c;
  }
}

TEST_CASE("pilot limited throughput peak") {
  const double rho0 = 7.0;
  CHECK(pilot_limited_throughput(kRefB, rho0, kRefB) == doctest::Approx(kRefB * std::log2(1.0 + rho0)));
  const auto peak = pilot_limited_peak(rho0, kRefB);
  CHECK(pilot_limited_throughput(100 * peak.bandwidth, rho0, kRefB) < peak.throughput);
  // dense grid oracle, refined once around the coarse maximum
  double best_b = 0.0, best = -1.0;
  for (int i = 0; i <= 120000; ++i) {
    const double b = std::pow(10.0, 5.0 + 6.0 * i / 120000.0);
    const double v = pilot_limited_throughput(b, rho0, kRefB);
    if (v > best) {
      best = v;
      best_b = b;
    }
  }
  CHECK(peak.bandwidth == doctest::Approx(best_b).epsilon(1e-3));
  CHECK(peak.throughput >= best * (1.0 - 1e-12));
  for (double rho : {0.5, 100.0, 1e4}) {
    const auto pk = pilot_limited_peak(rho, 1e6);
    CHECK(pilot_limited_throughput(pk.bandwidth * 1.01, rho, 1e6) < pk.throughput);
    CHECK(pilot_limited_throughput(pk.bandwidth / 1.01, rho, 1e6) < pk.throughput);
  }
}
