// SPDX-License-Identifier: Apache-2.0

#include "losmimo/zf_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "losmimo/errors.hpp"

namespace losmimo::zf {

namespace {

constexpr std::size_t kGramLeafRows = 64;

// Upper triangle of sum_m conj(g_mi) g_mj over rows [begin, end), accumulated
// into `acc` (interleaved re/im, row-major K x K).
void gram_leaf(const ChannelMatrix& g, std::size_t begin, std::size_t end, std::vector<double>& acc) {
  const std::size_t k_count = g.cols();
  const std::size_t rows = g.rows();
  const double* base = reinterpret_cast<const double*>(g.data().data());
  for (std::size_t i = 0; i < k_count; ++i) {
    const double* gi = base + 2 * i * rows;
    for (std::size_t j = i; j < k_count; ++j) {
      const double* gj = base + 2 * j * rows;
      double re = 0.0;
      double im = 0.0;
      for (std::size_t m = begin; m < end; ++m) {
        const double ar = gi[2 * m], ai = gi[2 * m + 1];
        const double br = gj[2 * m], bi = gj[2 * m + 1];
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
      }
      acc[2 * (i * k_count + j)] += re;
      acc[2 * (i * k_count + j) + 1] += im;
    }
  }
}

// Pairwise summation over row blocks keeps the rounding error O(log M).
std::vector<double> gram_pairwise(const ChannelMatrix& g, std::size_t begin, std::size_t end) {
  const std::size_t k_count = g.cols();
  if (end - begin <= kGramLeafRows) {
    std::vector<double> acc(2 * k_count * k_count, 0.0);
    gram_leaf(g, begin, end, acc);
    return acc;
  }
  const std::size_t blocks = (end - begin + kGramLeafRows - 1) / kGramLeafRows;
  const std::size_t mid = begin + (blocks / 2) * kGramLeafRows;
  auto left = gram_pairwise(g, begin, mid);
  const auto right = gram_pairwise(g, mid, end);
  for (std::size_t i = 0; i < left.size(); ++i) left[i] += right[i];
  return left;
}

// Lower-triangular L with A = L L^H. Throws on a pivot below tolerance.
std::vector<cplx> cholesky(const GramMatrix& a) {
  const std::size_t n = a.size;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i).real());
  const double tol = kPivotTolerance * max_diag;

  std::vector<cplx> l(n * n, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * n + k]);
    if (!(d > tol)) throw SingularChannelError(j, d);
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * std::conj(l[j * n + k]);
      l[i * n + j] = s / ljj;
    }
  }
  return l;
}

// X = L^{-1}, lower triangular.
std::vector<cplx> invert_lower(const std::vector<cplx>& l, std::size_t n) {
  std::vector<cplx> x(n * n, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    x[j * n + j] = 1.0 / l[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s{};
      for (std::size_t k = j; k < i; ++k) s -= l[i * n + k] * x[k * n + j];
      x[i * n + j] = s / l[i * n + i];
    }
  }
  return x;
}

GramMatrix inverse_from_factor(const std::vector<cplx>& x, std::size_t n) {
  GramMatrix inv{n, std::vector<cplx>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cplx s{};
      for (std::size_t k = j; k < n; ++k) s += std::conj(x[k * n + i]) * x[k * n + j];
      inv(i, j) = s;
      inv(j, i) = std::conj(s);
    }
  return inv;
}

double largest_eigenvalue(const GramMatrix& a) {
  const std::size_t n = a.size;
  std::vector<cplx> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.37 * static_cast<double>(i), 0.11 * static_cast<double>(i));
  double lambda = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      w[i] = s;
      norm += std::norm(s);
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    double vnorm = 0.0;
    for (const auto& e : v) vnorm += std::norm(e);
    lambda = norm / std::sqrt(vnorm);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return lambda;
}

}  // namespace

GramMatrix gram_matrix(const ChannelMatrix& g) {
  const std::size_t n = g.cols();
  GramMatrix gram{n, std::vector<cplx>(n * n)};
  if (g.rows() == 0) return gram;
  const auto acc = gram_pairwise(g, 0, g.rows());
  for (std::size_t i = 0; i < n; ++i) {
    gram(i, i) = cplx(acc[2 * (i * n + i)], 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v(acc[2 * (i * n + j)], acc[2 * (i * n + j) + 1]);
      gram(i, j) = v;
      gram(j, i) = std::conj(v);
    }
  }
  return gram;
}

GramMatrix inverse_gram(const GramMatrix& gram) {
  const auto l = cholesky(gram);
  return inverse_from_factor(invert_lower(l, gram.size), gram.size);
}

ZfDiagnostics zf_diagnostics(const ChannelMatrix& g) {
  if (g.rows() < g.cols())
    throw ConfigError("zero-forcing needs M >= K (M = " + std::to_string(g.rows()) + ", K = " +
                      std::to_string(g.cols()) + ")");
  ZfDiagnostics diag;
  diag.gram = gram_matrix(g);
  const std::size_t n = diag.gram.size;
  const auto x = invert_lower(cholesky(diag.gram), n);

  diag.inv_gram_diag.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t r = k; r < n; ++r) s += std::norm(x[r * n + k]);
    diag.inv_gram_diag[k] = s;
  }

  const double lmax = largest_eigenvalue(diag.gram);
  const double inv_lmax = largest_eigenvalue(inverse_from_factor(x, n));
  diag.condition_estimate = lmax * inv_lmax;
  return diag;
}

double zf_uplink_gain(const ZfDiagnostics& diag, std::size_t k) { return 1.0 / diag.inv_gram_diag.at(k); }

ZfPrecoders zf_precoders(const ChannelMatrix& g) {
  if (g.rows() < g.cols())
    throw ConfigError("zero-forcing needs M >= K (M = " + std::to_string(g.rows()) + ", K = " +
                      std::to_string(g.cols()) + ")");
  const auto inv = inverse_gram(gram_matrix(g));
  const std::size_t m_count = g.rows();
  const std::size_t k_count = g.cols();

  ZfPrecoders out{ChannelMatrix(m_count, k_count, g.carrier_wavelength()), std::vector<double>(k_count)};
  for (std::size_t k = 0; k < k_count; ++k) {
    auto w = out.directions.column(k);
    for (std::size_t j = 0; j < k_count; ++j) {
      const cplx c = inv(j, k);
      const auto gj = g.column(j);
      for (std::size_t m = 0; m < m_count; ++m) {
        w[m] += cplx(gj[m].real() * c.real() - gj[m].imag() * c.imag(),
                     gj[m].real() * c.imag() + gj[m].imag() * c.real());
      }
    }
    double norm2 = 0.0;
    for (const auto& v : w) norm2 += std::norm(v);
    const double norm = std::sqrt(norm2);
    out.norms[k] = norm;
    for (auto& v : w) v /= norm;
  }
  return out;
}

}  // namespace losmimo::zf
