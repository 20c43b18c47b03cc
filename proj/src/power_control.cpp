// SPDX-License-Identifier: Apache-2.0

#include "losmimo/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace losmimo::power {

bool CouplingMatrix::all_zero() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

PowerAllocation maxmin_uplink_single(const zf::ZfDiagnostics& diag, double noise_power, double max_power) {
  const auto& d = diag.inv_gram_diag;
  if (d.empty()) throw std::invalid_argument("maxmin_uplink_single: no terminals");
  const auto worst = std::max_element(d.begin(), d.end());
  PowerAllocation out;
  out.achieved_sinr = max_power / (noise_power * *worst);
  out.powers.resize(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out.powers[k] = out.achieved_sinr * noise_power * d[k];
  const auto k_star = static_cast<std::size_t>(worst - d.begin());
  out.powers[k_star] = max_power;
  out.binding = "terminal " + std::to_string(k_star) + " at P_max";
  return out;
}

PowerAllocation maxmin_downlink_single(const zf::ZfDiagnostics& diag, double noise_power, double total_power) {
  const auto& d = diag.inv_gram_diag;
  if (d.empty()) throw std::invalid_argument("maxmin_downlink_single: no terminals");
  double trace = 0.0;
  for (double v : d) trace += v;
  PowerAllocation out;
  out.achieved_sinr = total_power / (noise_power * trace);
  out.powers.resize(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out.powers[k] = total_power * (d[k] / trace);
  out.binding = "downlink power pool";
  return out;
}

std::vector<double> coupled_sinrs(std::span<const double> gains, const CouplingMatrix& coupling, double noise_power,
                                  std::span<const double> powers) {
  const std::size_t n = gains.size();
  std::vector<double> sinr(n);
  for (std::size_t k = 0; k < n; ++k) {
    double interference = noise_power;
    for (std::size_t j = 0; j < n; ++j) interference += coupling(k, j) * powers[j];
    sinr[k] = powers[k] * gains[k] / interference;
  }
  return sinr;
}

FixedPointResult interference_fixed_point(double target, std::span<const double> gains,
                                          const CouplingMatrix& coupling, double noise_power,
                                          std::span<const double> start, std::span<const double> divergence_level,
                                          const SolverOptions& options,
                                          const std::function<void(std::span<const double>)>& observer) {
  const std::size_t n = gains.size();
  FixedPointResult res;
  std::vector<double> current(start.begin(), start.end());
  std::vector<double> next(n);
  for (int iter = 1; iter <= options.max_inner_iterations; ++iter) {
    double max_step = 0.0;
    double max_value = 0.0;
    bool diverged = false;
    for (std::size_t k = 0; k < n; ++k) {
      const double* row = coupling.values.data() + k * n;
      double interference = noise_power;
      for (std::size_t j = 0; j < n; ++j) interference += row[j] * current[j];
      next[k] = target * interference / gains[k];
      max_step = std::max(max_step, std::abs(next[k] - current[k]));
      max_value = std::max(max_value, next[k]);
      if (next[k] > divergence_level[k]) diverged = true;
    }
    current.swap(next);
    res.iterations = iter;
    if (observer) observer(current);
    if (diverged) {
      res.status = FixedPointStatus::diverged;
      res.powers = std::move(current);
      return res;
    }
    if (max_step <= options.inner_rel_tol * max_value) {
      res.status = FixedPointStatus::converged;
      res.powers = std::move(current);
      return res;
    }
  }
  res.status = FixedPointStatus::iteration_cap;
  res.powers = std::move(current);
  return res;
}

namespace {

// Solves (I - t diag(1/gains) C) p = t * noise / gains by Gaussian elimination
// with partial pivoting. Used to polish the converged fixed point.
std::vector<double> solve_fixed_point(double target, std::span<const double> gains, const CouplingMatrix& c,
                                      double noise_power) {
  const std::size_t n = gains.size();
  std::vector<double> a(n * n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = -target * c(i, j) / gains[i];
    a[i * n + i] += 1.0;
    b[i] = target * noise_power / gains[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) return {};
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

enum class CapKind { per_terminal, per_cell };

struct Caps {
  CapKind kind;
  double value;
  std::span<const int> cell_of;
  std::size_t cells;
};

std::size_t count_cells(std::span<const int> cell_of) {
  int max_cell = -1;
  for (int c : cell_of) max_cell = std::max(max_cell, c);
  return static_cast<std::size_t>(max_cell + 1);
}

std::vector<double> cell_sums(std::span<const double> powers, const Caps& caps) {
  std::vector<double> sums(caps.cells, 0.0);
  for (std::size_t k = 0; k < powers.size(); ++k) sums[static_cast<std::size_t>(caps.cell_of[k])] += powers[k];
  return sums;
}

bool within_caps(std::span<const double> powers, const Caps& caps, double slack = 1.0) {
  if (caps.kind == CapKind::per_terminal)
    return std::all_of(powers.begin(), powers.end(), [&](double p) { return p <= caps.value * slack; });
  const auto sums = cell_sums(powers, caps);
  return std::all_of(sums.begin(), sums.end(), [&](double s) { return s <= caps.value * slack; });
}

std::string describe_binding(std::span<const double> powers, const Caps& caps) {
  if (caps.kind == CapKind::per_terminal) {
    const auto it = std::max_element(powers.begin(), powers.end());
    return "terminal " + std::to_string(it - powers.begin()) + " at P_max";
  }
  const auto sums = cell_sums(powers, caps);
  const auto it = std::max_element(sums.begin(), sums.end());
  return "cell " + std::to_string(it - sums.begin()) + " power pool";
}

// Decoupled problem: every cell has its own closed form; the system-wide
// common SINR is the smallest of them.
PowerAllocation decoupled(std::span<const double> norm2, const Caps& caps, double noise_power) {
  std::vector<double> worst(caps.cells, 0.0);
  std::vector<double> trace(caps.cells, 0.0);
  for (std::size_t k = 0; k < norm2.size(); ++k) {
    const auto c = static_cast<std::size_t>(caps.cell_of[k]);
    worst[c] = std::max(worst[c], norm2[k]);
    trace[c] += norm2[k];
  }
  PowerAllocation out;
  out.achieved_sinr = std::numeric_limits<double>::infinity();
  std::size_t binding_cell = 0;
  for (std::size_t c = 0; c < caps.cells; ++c) {
    const double denom = caps.kind == CapKind::per_terminal ? worst[c] : trace[c];
    if (denom == 0.0) continue;
    const double t = caps.value / (noise_power * denom);
    if (t < out.achieved_sinr) {
      out.achieved_sinr = t;
      binding_cell = c;
    }
  }
  out.powers.resize(norm2.size());
  for (std::size_t k = 0; k < norm2.size(); ++k) {
    const auto c = static_cast<std::size_t>(caps.cell_of[k]);
    if (caps.kind == CapKind::per_cell && c == binding_cell)
      out.powers[k] = caps.value * (norm2[k] / trace[c]);
    else
      out.powers[k] = out.achieved_sinr * noise_power * norm2[k];
  }
  out.binding = describe_binding(out.powers, caps);
  return out;
}

// Zero noise: SINR targets are scale free, so the optimum is 1/rho(B) with
// B = diag(norm2) C, and powers follow the Perron vector. Power iteration on
// B + I avoids oscillation for periodic (bipartite) coupling patterns.
PowerAllocation interference_limited(std::span<const double> norm2, const CouplingMatrix& c, const Caps& caps) {
  const std::size_t n = norm2.size();
  std::vector<double> x(n, 1.0), y(n);
  double rho = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double max_y = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += c(k, j) * x[j];
      const double bx = norm2[k] * s;
      y[k] = bx + x[k];
      if (x[k] > 0.0) {
        lo = std::min(lo, bx / x[k]);
        hi = std::max(hi, bx / x[k]);
      }
      max_y = std::max(max_y, y[k]);
    }
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / max_y;
    rho = 0.5 * (lo + hi);
    if (hi - lo <= 1e-14 * hi) break;
  }
  PowerAllocation out;
  out.achieved_sinr = rho > 0.0 ? 1.0 / rho : std::numeric_limits<double>::infinity();
  double peak = 0.0;
  if (caps.kind == CapKind::per_terminal) {
    peak = *std::max_element(x.begin(), x.end());
  } else {
    const auto sums = cell_sums(x, caps);
    peak = *std::max_element(sums.begin(), sums.end());
  }
  out.powers.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.powers[k] = x[k] * (caps.value / peak);
  out.binding = "interference limited (zero noise)";
  return out;
}

PowerAllocation bisect(std::span<const double> norm2, const CouplingMatrix& coupling, const Caps& caps,
                       double noise_power, const SolverOptions& options) {
  const std::size_t n = norm2.size();
  if (coupling.size != n) throw std::invalid_argument("coupling matrix size does not match terminal count");
  if (caps.cell_of.size() != n) throw std::invalid_argument("cell assignment size does not match terminal count");
  if (coupling.all_zero()) return decoupled(norm2, caps, noise_power);
  if (noise_power == 0.0) return interference_limited(norm2, coupling, caps);

  std::vector<double> gains(n);
  for (std::size_t k = 0; k < n; ++k) gains[k] = 1.0 / norm2[k];

  // Interference-free bound; coupling can only lower the achievable target.
  double hi = decoupled(norm2, caps, noise_power).achieved_sinr;
  const std::vector<double> divergence(n, caps.value);

  SolverOptions inner = options;
  if (options.inner == InnerMethod::hybrid) inner.max_inner_iterations = options.hybrid_fixed_point_budget;

  std::vector<double> best(n, 0.0);
  bool undecided = false;
  // Phase one: geometric bisection with the monotone fixed point. Iterates
  // from a sub-solution are nondecreasing, so crossing the cap at any step
  // already proves infeasibility.
  auto feasible = [&](double t, std::vector<double>& powers) {
    auto fp = interference_fixed_point(t, gains, coupling, noise_power, best, divergence, inner);
    if (fp.status == FixedPointStatus::diverged) return false;
    if (fp.status == FixedPointStatus::converged) {
      if (!within_caps(fp.powers, caps)) return false;
      powers = std::move(fp.powers);
      return true;
    }
    undecided = true;
    return false;
  };

  // Largest load relative to its cap at the exact limit of the iteration, or
  // +inf when rho(t B) >= 1 (no non-negative solution).
  const double infinity = std::numeric_limits<double>::infinity();
  auto excess = [&](double t, std::vector<double>& powers) {
    powers = solve_fixed_point(t, gains, coupling, noise_power);
    if (powers.empty() || !std::all_of(powers.begin(), powers.end(), [](double p) { return p > 0.0; }))
      return infinity;
    double worst = 0.0;
    if (caps.kind == CapKind::per_terminal) {
      for (double p : powers) worst = std::max(worst, p / caps.value);
    } else {
      for (double sum : cell_sums(powers, caps)) worst = std::max(worst, sum / caps.value);
    }
    return worst - 1.0;
  };

  double lo = hi * 1e-12;
  std::vector<double> scratch;
  if (!feasible(lo, scratch)) {
    lo = 0.0;
    undecided = false;
  } else {
    best = scratch;
  }

  PowerAllocation out;
  auto converged = [&] { return hi - lo <= options.bisection_rel_tol * lo; };
  while (out.bisection_steps < options.max_bisection_steps && !converged()) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    ++out.bisection_steps;
    if (feasible(mid, scratch)) {
      lo = mid;
      best = scratch;
    } else if (undecided && options.inner == InnerMethod::hybrid) {
      // Not settled within the budget: leave the bracket untouched for phase two.
      break;
    } else {
      // Pure fixed point: an unsettled iteration counts as infeasible.
      hi = mid;
      undecided = false;
    }
  }

  // Phase two (hybrid): the load excess is continuous and increasing in t up
  // to the spectral limit, so an Illinois-type regula falsi on the exact
  // fixed point closes the bracket in a handful of linear solves.
  if (undecided && options.inner == InnerMethod::hybrid && lo > 0.0) {
    double f_lo = excess(lo, scratch);
    double f_hi = excess(hi, scratch);
    int retained = 0;
    while (out.bisection_steps < options.max_bisection_steps && !converged()) {
      ++out.bisection_steps;
      double t = std::sqrt(lo * hi);
      if (std::isfinite(f_hi) && f_lo < 0.0 && f_hi > 0.0) {
        const double guess = lo + (hi - lo) * (-f_lo) / (f_hi - f_lo);
        if (guess > lo && guess < hi) t = guess;
      }
      const double f = excess(t, scratch);
      if (f <= 0.0) {
        lo = t;
        f_lo = f;
        best = scratch;
        if (retained == 1) f_hi *= 0.5;
        retained = 1;
      } else {
        hi = t;
        f_hi = f;
        if (retained == -1) f_lo *= 0.5;
        retained = -1;
      }
    }
  }

  out.achieved_sinr = lo;
  if (lo > 0.0) {
    auto exact = solve_fixed_point(lo, gains, coupling, noise_power);
    const bool usable = !exact.empty() &&
                        std::all_of(exact.begin(), exact.end(), [](double p) { return p > 0.0; }) &&
                        within_caps(exact, caps, 1.0 + 1e-9);
    out.powers = usable ? std::move(exact) : best;
  } else {
    out.powers = best;
  }
  out.binding = describe_binding(out.powers, caps);
  return out;
}

}  // namespace

PowerAllocation maxmin_uplink_multicell(std::span<const double> receiver_norm2, const CouplingMatrix& coupling,
                                        std::span<const int> cell_of, double noise_power, double max_power,
                                        const SolverOptions& options) {
  const Caps caps{CapKind::per_terminal, max_power, cell_of, count_cells(cell_of)};
  return bisect(receiver_norm2, coupling, caps, noise_power, options);
}

PowerAllocation maxmin_downlink_multicell(std::span<const double> precoder_norm2, const CouplingMatrix& coupling,
                                          std::span<const int> cell_of, double noise_power, double cell_power,
                                          const SolverOptions& options) {
  const Caps caps{CapKind::per_cell, cell_power, cell_of, count_cells(cell_of)};
  return bisect(precoder_norm2, coupling, caps, noise_power, options);
}

}  // namespace losmimo::power
