// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "losmimo/config.hpp"
#include "losmimo/power_control.hpp"

namespace losmimo::montecarlo {

enum class Link { uplink, downlink };

std::string_view to_string(Link link);

/// Empirical distribution of per-realization max-min SINR, in dB.
struct CdfSummary {
  std::vector<double> sorted_samples;
  std::size_t n_trials = 0;
  std::size_t n_degenerate_redraws = 0;
};

CdfSummary make_cdf(std::vector<double> samples_db, std::size_t degenerate_redraws = 0);

/// Linear interpolation between order statistics at 1-based rank q*(n-1)+1.
/// Requires 0 < q < 1 and at least two samples; throws std::domain_error otherwise.
double percentile(const CdfSummary& cdf, double q);

struct LinkCdfs {
  CdfSummary uplink;
  CdfSummary downlink;

  const CdfSummary& operator[](Link link) const { return link == Link::uplink ? uplink : downlink; }
};

/// Worker threads for trial execution: LOSMIMO_WORKERS if set, else the hardware concurrency.
unsigned default_workers();

struct RunOptions {
  unsigned workers = 0;  // 0 selects default_workers()
  /// Redraws allowed before the run is aborted, as a fraction of the trial count.
  double max_degenerate_fraction = 0.01;
};

/// Runs `body(i)` for i in [0, n) on `workers` threads. Each index runs exactly once.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

/// Single-cell Monte-Carlo run. Trial t draws from Rng::for_trial(seed, t), so
/// the samples do not depend on the worker count. A singular Gram matrix
/// triggers a redraw of the placement; more than max_degenerate_fraction * n
/// redraws abort with DegenerateTrialsError.
LinkCdfs run_trials(const ScenarioConfig& cfg, std::size_t n, std::uint64_t seed, const RunOptions& options = {});

/// Multi-cell run on the configured cell layout (seven cells unless the config
/// says single) with system-wide max-min power control.
LinkCdfs run_multicell(const ScenarioConfig& cfg, std::size_t n, std::uint64_t seed,
                       const RunOptions& options = {}, const power::SolverOptions& solver = {});

/// Dispatches on cfg.layout.
LinkCdfs run_configured(const ScenarioConfig& cfg, std::size_t n, std::uint64_t seed, const RunOptions& options = {});

struct SearchOptions {
  Link link = Link::uplink;
  double quantile = 0.05;
  std::size_t trials_per_eval = 500;
  /// Trial count of the confirmation pass around the located M; 0 disables it.
  std::size_t confirm_trials = 2000;
  std::uint64_t seed = 1;
  RunOptions run;
};

struct SearchResult {
  bool attainable = false;
  int antennas = 0;  // M*
  double target_db = 0.0;
  double quantile = 0.05;
  int bracket_low = 0;   // largest evaluated M that misses the target
  int bracket_high = 0;  // smallest evaluated M that meets it
  std::size_t trials_per_eval = 0;
  double achieved_db = std::numeric_limits<double>::quiet_NaN();
};

/// Smallest M (>= K) whose `quantile` SINR meets `target_db`. Exponential
/// bracketing from M = K, then binary search, then an optional confirmation
/// walk at confirm_trials. The final answer satisfies quantile(M*) >= target
/// and quantile(M*-1) < target at the reported trial count. Returns
/// attainable = false if cfg.max_antennas does not reach the target.
SearchResult find_min_antennas(const ScenarioConfig& cfg, double target_db, const SearchOptions& options = {});

/// quantile SINR (dB) of `link` for cfg with M antennas.
double quantile_at(const ScenarioConfig& cfg, int antennas, Link link, double quantile, std::size_t n,
                   std::uint64_t seed, const RunOptions& options = {});

}  // namespace losmimo::montecarlo
