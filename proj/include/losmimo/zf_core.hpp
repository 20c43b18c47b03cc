// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "losmimo/channel.hpp"

namespace losmimo::zf {

using channel::ChannelMatrix;
using channel::cplx;

/// Relative Cholesky pivot tolerance, scaled by the largest Gram diagonal.
inline constexpr double kPivotTolerance = 1e-12;

/// Row-major K x K Hermitian matrix.
struct GramMatrix {
  std::size_t size = 0;
  std::vector<cplx> values;

  cplx& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

/// G^H G with pairwise summation over the M rows.
GramMatrix gram_matrix(const ChannelMatrix& g);

struct ZfDiagnostics {
  GramMatrix gram;
  /// [(G^H G)^{-1}]_kk; equals ||w_k||^2 for the pseudoinverse column w_k.
  std::vector<double> inv_gram_diag;
  /// Ratio of the largest to the smallest Gram eigenvalue estimate.
  double condition_estimate = 0.0;

  std::size_t terminals() const { return inv_gram_diag.size(); }
};

/// Throws SingularChannelError when a Cholesky pivot falls below tolerance
/// and ConfigError when M < K.
ZfDiagnostics zf_diagnostics(const ChannelMatrix& g);

/// Full inverse of a Hermitian positive definite Gram matrix.
GramMatrix inverse_gram(const GramMatrix& gram);

/// Post-ZF effective power gain 1/[(G^H G)^{-1}]_kk.
double zf_uplink_gain(const ZfDiagnostics& diag, std::size_t k);

/// Pseudoinverse columns w_k = [G (G^H G)^{-1}]_k as unit directions plus norms.
struct ZfPrecoders {
  ChannelMatrix directions;  // a_k = w_k / ||w_k||
  std::vector<double> norms;  // ||w_k||
};

ZfPrecoders zf_precoders(const ChannelMatrix& g);

}  // namespace losmimo::zf
