// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "losmimo/zf_core.hpp"

namespace losmimo::power {

/// Row-major N x N non-negative coupling matrix.
struct CouplingMatrix {
  std::size_t size = 0;
  std::vector<double> values;

  CouplingMatrix() = default;
  explicit CouplingMatrix(std::size_t n) : size(n), values(n * n, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }

  bool all_zero() const;
};

struct PowerAllocation {
  /// Uplink transmit powers p_k, or downlink power shares q_k (Watt).
  std::vector<double> powers;
  /// Common max-min SINR (linear).
  double achieved_sinr = 0.0;
  /// Which constraint is active, e.g. "terminal 3 at P_max".
  std::string binding;
  /// Outer bisection steps taken; zero for closed forms.
  int bisection_steps = 0;
};

/// SINR* = P_max / (sigma2 * max_k [(G^H G)^{-1}]_kk); the worst terminal transmits P_max.
PowerAllocation maxmin_uplink_single(const zf::ZfDiagnostics& diag, double noise_power, double max_power);

/// SINR* = P_dl / (sigma2 * trace((G^H G)^{-1})); the power pool is spent completely.
PowerAllocation maxmin_downlink_single(const zf::ZfDiagnostics& diag, double noise_power, double total_power);

enum class InnerMethod {
  /// Monotone fixed point only; hitting the iteration cap counts as infeasible.
  fixed_point,
  /// Monotone fixed point for a short budget, then the exact limit
  /// (I - t diag(1/gain) C)^{-1} t sigma^2/gain when it has not settled.
  hybrid,
};

struct SolverOptions {
  InnerMethod inner = InnerMethod::hybrid;
  int hybrid_fixed_point_budget = 20;
  double bisection_rel_tol = 1e-9;
  int max_bisection_steps = 200;
  int max_inner_iterations = 500;
  /// Fixed point is converged when max_k |p_k^(n+1) - p_k^(n)| <= tol * max_k p_k^(n+1).
  double inner_rel_tol = 1e-12;
};

/// Per-terminal SINR_k = p_k * gain_k / (sigma2 + sum_j coupling(k, j) * p_j).
std::vector<double> coupled_sinrs(std::span<const double> gains, const CouplingMatrix& coupling,
                                  double noise_power, std::span<const double> powers);

enum class FixedPointStatus { converged, diverged, iteration_cap };

struct FixedPointResult {
  FixedPointStatus status = FixedPointStatus::iteration_cap;
  std::vector<double> powers;
  int iterations = 0;
};

/// Iterates p_k <- t * (sigma2 + sum_j coupling(k, j) p_j) / gain_k from `start`.
/// When `start` is a sub-solution (start <= T(start)), the iterates are
/// componentwise nondecreasing and converge to the minimal fixed point.
/// Divergence is declared as soon as any p_k exceeds `divergence_level[k]`.
/// `observer` is called with every iterate.
FixedPointResult interference_fixed_point(
    double target, std::span<const double> gains, const CouplingMatrix& coupling, double noise_power,
    std::span<const double> start, std::span<const double> divergence_level, const SolverOptions& options,
    const std::function<void(std::span<const double>)>& observer = {});

/// System-wide max-min uplink with per-terminal caps. receiver_norm2[k] is
/// ||w_k||^2 = [(G_c^H G_c)^{-1}]_kk at the serving array (ZF gain is its
/// inverse); coupling(k, j) = |v_k^H g_j|^2 for the unit-norm receiver v_k and
/// foreign-cell j, 0 within the cell. Solved by geometric bisection on the
/// common target with the monotone fixed point as feasibility test; a zero
/// coupling matrix falls back to the per-cell closed forms.
PowerAllocation maxmin_uplink_multicell(std::span<const double> receiver_norm2, const CouplingMatrix& coupling,
                                        std::span<const int> cell_of, double noise_power, double max_power,
                                        const SolverOptions& options = {});

/// System-wide max-min downlink with a per-cell power pool. precoder_norm2[k] is
/// ||w_k||^2, coupling(k, j) = |g_{k<-cell(j)}^H a_j|^2 for foreign-cell j.
PowerAllocation maxmin_downlink_multicell(std::span<const double> precoder_norm2, const CouplingMatrix& coupling,
                                          std::span<const int> cell_of, double noise_power, double cell_power,
                                          const SolverOptions& options = {});

}  // namespace losmimo::power
