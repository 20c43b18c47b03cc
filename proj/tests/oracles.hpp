// SPDX-License-Identifier: Apache-2.0
// Reference implementations used only by the tests. They share no code with
// the library: plain nested vectors, textbook Gauss-Jordan, scalar bisection.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "losmimo/channel.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;  // [row][col]

inline Matrix from_channel(const losmimo::channel::ChannelMatrix& g) {
  Matrix out(g.rows(), std::vector<cplx>(g.cols()));
  for (std::size_t m = 0; m < g.rows(); ++m)
    for (std::size_t k = 0; k < g.cols(); ++k) out[m][k] = g(m, k);
  return out;
}

inline Matrix adjoint(const Matrix& a) {
  Matrix out(a[0].size(), std::vector<cplx>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = std::conj(a[i][j]);
  return out;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out(a.size(), std::vector<cplx>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j) {
      cplx s = 0.0;
      for (std::size_t l = 0; l < b.size(); ++l) s += a[i][l] * b[l][j];
      out[i][j] = s;
    }
  return out;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    const cplx d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const cplx f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Moore-Penrose pseudoinverse transpose for full column rank G: W = G (G^H G)^{-1}.
inline Matrix pinv_columns(const Matrix& g) { return multiply(g, invert(multiply(adjoint(g), g))); }

inline double column_norm2(const Matrix& a, std::size_t k) {
  double s = 0.0;
  for (const auto& row : a) s += std::norm(row[k]);
  return s;
}

/// Random complex Gaussian M x K channel with unit-variance entries.
inline losmimo::channel::ChannelMatrix random_channel(std::mt19937_64& gen, std::size_t m, std::size_t k,
                                                      double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  losmimo::channel::ChannelMatrix g(m, k, 1.0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < m; ++r) g(r, c) = {n(gen), n(gen)};
  return g;
}

/// Largest x in [lo, hi] with feasible(x), assuming monotone feasibility.
inline double bisect_max(const std::function<bool(double)>& feasible, double lo, double hi, int steps = 400) {
  for (int i = 0; i < steps; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

/// Single-cell uplink: target t needs p_k = t sigma2 d_k, each at most P.
inline double uplink_maxmin(const std::vector<double>& d, double sigma2, double p_max) {
  auto ok = [&](double t) {
    return std::all_of(d.begin(), d.end(), [&](double dk) { return t * sigma2 * dk <= p_max; });
  };
  return bisect_max(ok, 1e-30, 1e30);
}

/// Single-cell downlink: target t needs q_k = t sigma2 d_k with sum q_k at most P.
inline double downlink_maxmin(const std::vector<double>& d, double sigma2, double p_total) {
  auto ok = [&](double t) {
    double s = 0.0;
    for (double dk : d) s += t * sigma2 * dk;
    return s <= p_total;
  };
  return bisect_max(ok, 1e-30, 1e30);
}

/// Two terminals in two cells, scalar gains g_k = 1/d_k, cross couplings
/// c01 (into 0 from 1) and c10, power cap P on each. The minimal power
/// solution of q = t D (sigma2 + C q) is
///   q0 = t d0 sigma2 (1 + t d1 c01) / (1 - t^2 d0 d1 c01 c10)
/// and symmetric for q1. Setting q_k = P gives a quadratic in t; the max-min
/// target is the smaller positive root.
inline double two_cell_maxmin(double d0, double d1, double c01, double c10, double sigma2, double p) {
  const double a = d0 * d1 * c01 * c10;
  auto root = [&](double da, double db, double cab) {
    // t^2 (P a + da db sigma2 cab) + t da sigma2 - P = 0
    const double qa = p * a + da * db * sigma2 * cab;
    const double qb = da * sigma2;
    if (qa == 0.0) return p / qb;
    return (-qb + std::sqrt(qb * qb + 4.0 * qa * p)) / (2.0 * qa);
  };
  return std::min(root(d0, d1, c01), root(d1, d0, c10));
}

}  // namespace oracle
