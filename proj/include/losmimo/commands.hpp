// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "losmimo/config.hpp"
#include "losmimo/montecarlo.hpp"

namespace losmimo::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kConfigError = 2,
  kUnattainable = 3,
  kDegenerate = 4,
};

struct CommandOptions {
  bool quiet = false;
  unsigned workers = 0;  // 0: LOSMIMO_WORKERS or hardware concurrency
  std::ostream* log = nullptr;  // progress and summaries; std::cerr when null
};

struct LabeledCdfs {
  std::string scenario;
  montecarlo::LinkCdfs cdfs;
};

/// `sinr_db,cum_prob,link,scenario`, one row per sorted sample, uplink then
/// downlink for each scenario. cum_prob of the i-th (0-based) sample is (i+1)/n.
std::string cdf_csv(std::span<const LabeledCdfs> runs);

/// JSON summary: version, command, seed, resolved config and 5/50/95 percentiles.
std::string summary_json(std::string_view command, const ScenarioConfig& cfg, std::span<const LabeledCdfs> runs);

/// Resolved configuration as a JSON object string.
std::string config_json(const ScenarioConfig& cfg);

/// Sibling path of the CSV for the JSON summary (extension replaced by .json).
std::string summary_path(const std::string& csv_path);

/// Monte-Carlo CDFs for the configured layout (or forced seven-cell).
int cmd_simulate(const ScenarioConfig& cfg, const std::string& out_path, const CommandOptions& options,
                 bool force_multicell = false);

/// Uplink CDFs for circular, rectangular and linear arrays at cfg.antennas.
int cmd_geometry_compare(const ScenarioConfig& cfg, const std::string& out_path, const CommandOptions& options);

struct FindOptions {
  montecarlo::Link link = montecarlo::Link::uplink;
  double quantile = 0.05;
  std::size_t eval_trials = 500;
  std::size_t confirm_trials = 2000;
};

struct AntennaRow {
  double target_db = 0.0;
  montecarlo::SearchResult result;
};

/// `target_db,M,array_diameter_m` with diameter M*lambda/(2*pi); NA for unattainable targets.
std::string antenna_csv(const ScenarioConfig& cfg, std::span<const AntennaRow> rows);

std::vector<AntennaRow> find_antennas(const ScenarioConfig& cfg, std::span<const double> targets,
                                      const FindOptions& find, unsigned workers);

int cmd_find_antennas(const ScenarioConfig& cfg, std::span<const double> targets, const std::string& out_path,
                      const FindOptions& find, const CommandOptions& options);

struct BandwidthArgs {
  double reference_bandwidth = 20e6;  // Hz
  double reference_power = 10.0;      // W
  double reference_rate = 60e6;       // bit/s
  double sweep_from = 1e6;            // Hz
  double sweep_to = 1e12;             // Hz
  int points_per_decade = 4;
};

/// Sweep table `bandwidth_hz,capacity_bps,capacity_limit_bps,power_for_proportional_rate_w,pilot_limited_bps`.
std::string bandwidth_csv(const BandwidthArgs& args);

/// Worked numbers printed next to the table (required powers, pilot-limited peak).
std::string bandwidth_report(const BandwidthArgs& args);

int cmd_bandwidth(const BandwidthArgs& args, const std::string& out_path, const CommandOptions& options);

}  // namespace losmimo::cli
