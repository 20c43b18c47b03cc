// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "losmimo/commands.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/version.hpp"

namespace {

struct ScenarioFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out = "-";
  bool quiet = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario file (flat key = value)");
    cmd->add_option("--set", overrides, "Override one key, e.g. --set 'carrier_frequency = 60 GHz'");
    cmd->add_option("--seed", seed, "Experiment seed");
    cmd->add_option("--trials", trials, "Monte-Carlo trials");
    cmd->add_option("--out", out, "Output CSV path ('-' for stdout)");
    cmd->add_flag("--quiet", quiet, "Suppress the summary on stderr");
  }

  losmimo::ScenarioConfig resolve() const {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw losmimo::ConfigError("cannot read config file '" + config_path + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    for (const auto& o : overrides) text += (text.empty() ? "" : "\n") + o;
    auto cfg = losmimo::parse_config(text);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.n_trials = *trials;
    losmimo::validate(cfg);
    return cfg;
  }

  losmimo::cli::CommandOptions options() const { return {quiet, 0, nullptr}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line-of-sight Massive MIMO antenna-count simulator"};
  app.set_version_flag("--version", std::string(losmimo::version()));
  app.require_subcommand(1);

  ScenarioFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Single-cell (or configured layout) SINR CDFs");
  sim_flags.attach(simulate);

  ScenarioFlags multi_flags;
  auto* multicell = app.add_subcommand("simulate-multicell", "Seven-cell system-wide max-min SINR CDFs");
  multi_flags.attach(multicell);

  ScenarioFlags geo_flags;
  auto* geometry = app.add_subcommand("geometry-compare", "CDFs for circular, rectangular and linear arrays");
  geo_flags.attach(geometry);

  ScenarioFlags find_flags;
  std::vector<double> targets;
  std::string link = "uplink";
  std::size_t eval_trials = 500;
  double quantile = 0.05;
  auto* find = app.add_subcommand("find-antennas", "Minimal M reaching 95%-likely SINR targets");
  find_flags.attach(find);
  find->add_option("--targets", targets, "SINR targets in dB")->required()->delimiter(',');
  find->add_option("--link", link, "uplink or downlink")->check(CLI::IsMember({"uplink", "downlink"}));
  find->add_option("--eval-trials", eval_trials, "Trials per search evaluation");
  find->add_option("--quantile", quantile, "Outage quantile (0.05 = 95%-likely)");

  losmimo::cli::BandwidthArgs bw;
  std::string bw_out = "-";
  bool bw_quiet = false;
  auto* bandwidth = app.add_subcommand("bandwidth", "Shannon bandwidth/power tradeoff tables");
  bandwidth->add_option("--ref-bandwidth", bw.reference_bandwidth, "Reference bandwidth B0 in Hz");
  bandwidth->add_option("--ref-power", bw.reference_power, "Reference received power in W");
  bandwidth->add_option("--ref-rate", bw.reference_rate, "Rate carried at the reference point, bit/s");
  bandwidth->add_option("--from", bw.sweep_from, "Sweep start, Hz");
  bandwidth->add_option("--to", bw.sweep_to, "Sweep end, Hz");
  bandwidth->add_option("--points-per-decade", bw.points_per_decade, "Sweep density");
  bandwidth->add_option("--out", bw_out, "Output CSV path ('-' for stdout)");
  bandwidth->add_flag("--quiet", bw_quiet, "Suppress the worked numbers on stderr");

  CLI11_PARSE(app, argc, argv);

  namespace cli = losmimo::cli;
  try {
    if (*bandwidth) return cli::cmd_bandwidth(bw, bw_out, {bw_quiet, 0, nullptr});
    if (*simulate) return cli::cmd_simulate(sim_flags.resolve(), sim_flags.out, sim_flags.options());
    if (*multicell) return cli::cmd_simulate(multi_flags.resolve(), multi_flags.out, multi_flags.options(), true);
    if (*geometry) return cli::cmd_geometry_compare(geo_flags.resolve(), geo_flags.out, geo_flags.options());
    if (*find) {
      const auto cfg = find_flags.resolve();
      cli::FindOptions opts;
      opts.link = link == "uplink" ? losmimo::montecarlo::Link::uplink : losmimo::montecarlo::Link::downlink;
      opts.quantile = quantile;
      opts.eval_trials = eval_trials;
      opts.confirm_trials = static_cast<std::size_t>(cfg.n_trials);
      return cli::cmd_find_antennas(cfg, targets, find_flags.out, opts, find_flags.options());
    }
  } catch (const losmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kConfigError;
  }
  return cli::kOk;
}
