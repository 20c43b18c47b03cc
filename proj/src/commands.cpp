// SPDX-License-Identifier: Apache-2.0

#include "losmimo/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "losmimo/bandwidth.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/geometry.hpp"
#include "losmimo/version.hpp"

namespace losmimo::cli {

using montecarlo::Link;

namespace {

std::ostream& log_of(const CommandOptions& o) { return o.log != nullptr ? *o.log : std::cerr; }

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

void emit(const std::string& path, const std::string& content) {
  if (to_stdout(path))
    std::cout << content << std::flush;
  else
    write_file(path, content);
}

template <typename Body>
int guarded(const CommandOptions& options, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log_of(options) << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DegenerateTrialsError& e) {
    log_of(options) << "aborted: " << e.what() << "\n";
    return kDegenerate;
  } catch (const std::ios_base::failure& e) {
    log_of(options) << "i/o error: " << e.what() << "\n";
    return kIoError;
  }
}

nlohmann::ordered_json cdf_stats(const montecarlo::CdfSummary& cdf) {
  nlohmann::ordered_json j;
  j["n_trials"] = cdf.n_trials;
  j["n_degenerate_redraws"] = cdf.n_degenerate_redraws;
  if (cdf.n_trials >= 2) {
    j["p5_db"] = montecarlo::percentile(cdf, 0.05);
    j["p50_db"] = montecarlo::percentile(cdf, 0.50);
    j["p95_db"] = montecarlo::percentile(cdf, 0.95);
  } else {
    j["p5_db"] = j["p50_db"] = j["p95_db"] = cdf.sorted_samples.front();
  }
  return j;
}

nlohmann::ordered_json config_object(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["carrier_frequency"] = cfg.carrier_frequency;
  j["wavelength"] = cfg.wavelength();
  j["M"] = cfg.antennas;
  j["K"] = cfg.terminals;
  j["array_shape"] = geometry::to_string(cfg.array_shape);
  j["rect_rows"] = cfg.rect_rows;
  j["cell_radius"] = cfg.cell_radius;
  j["bs_height"] = cfg.bs_height;
  j["terminal_height"] = cfg.terminal_height;
  j["P_dl"] = cfg.dl_power;
  j["P_ul_max"] = cfg.ul_max_power;
  j["bandwidth"] = cfg.bandwidth;
  j["noise_figure_bs"] = cfg.noise_figure_bs;
  j["noise_figure_terminal"] = cfg.noise_figure_terminal;
  j["layout"] = to_string(cfg.layout);
  j["intersite"] = cfg.intersite;
  j["n_trials"] = cfg.n_trials;
  j["seed"] = cfg.seed;
  j["amplitude_mode"] = channel::to_string(cfg.amplitude_mode);
  j["max_antennas"] = cfg.max_antennas;
  j["label"] = cfg.label;
  return j;
}

void write_outputs(std::string_view command, const ScenarioConfig& cfg, const std::vector<LabeledCdfs>& runs,
                   const std::string& out_path, const CommandOptions& options) {
  emit(out_path, cdf_csv(runs));
  if (!to_stdout(out_path)) write_file(summary_path(out_path), summary_json(command, cfg, runs));
  if (!options.quiet) {
    auto& log = log_of(options);
    for (const auto& r : runs)
      for (Link link : {Link::uplink, Link::downlink}) {
        const auto& cdf = r.cdfs[link];
        if (cdf.n_trials < 2) continue;
        log << r.scenario << " " << montecarlo::to_string(link) << ": 95%-likely "
            << fmt("%.2f", montecarlo::percentile(cdf, 0.05)) << " dB, median "
            << fmt("%.2f", montecarlo::percentile(cdf, 0.5)) << " dB (" << cdf.n_trials << " trials, "
            << cdf.n_degenerate_redraws << " redraws)\n";
      }
  }
}

}  // namespace

std::string cdf_csv(std::span<const LabeledCdfs> runs) {
  std::string out = "sinr_db,cum_prob,link,scenario\n";
  for (const auto& r : runs)
    for (Link link : {Link::uplink, Link::downlink}) {
      const auto& cdf = r.cdfs[link];
      const auto n = static_cast<double>(cdf.sorted_samples.size());
      for (std::size_t i = 0; i < cdf.sorted_samples.size(); ++i) {
        out += fmt("%.6f", cdf.sorted_samples[i]);
        out += ',';
        out += fmt("%.6f", static_cast<double>(i + 1) / n);
        out += ',';
        out += montecarlo::to_string(link);
        out += ',';
        out += r.scenario;
        out += '\n';
      }
    }
  return out;
}

std::string config_json(const ScenarioConfig& cfg) { return config_object(cfg).dump(2); }

std::string summary_json(std::string_view command, const ScenarioConfig& cfg, std::span<const LabeledCdfs> runs) {
  nlohmann::ordered_json j;
  j["version"] = std::string(version());
  j["command"] = std::string(command);
  j["seed"] = cfg.seed;
  j["config"] = config_object(cfg);
  auto& results = j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    nlohmann::ordered_json entry;
    entry["scenario"] = r.scenario;
    entry["uplink"] = cdf_stats(r.cdfs.uplink);
    entry["downlink"] = cdf_stats(r.cdfs.downlink);
    results.push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

std::string summary_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

int cmd_simulate(const ScenarioConfig& cfg, const std::string& out_path, const CommandOptions& options,
                 bool force_multicell) {
  return guarded(options, [&] {
    ScenarioConfig c = cfg;
    if (force_multicell) c.layout = CellLayoutKind::seven_cell;
    const montecarlo::RunOptions run{options.workers};
    const auto n = static_cast<std::size_t>(c.n_trials);
    std::vector<LabeledCdfs> runs{{c.scenario_name(), montecarlo::run_configured(c, n, c.seed, run)}};
    write_outputs(force_multicell ? "simulate-multicell" : "simulate", c, runs, out_path, options);
    return static_cast<int>(kOk);
  });
}

int cmd_geometry_compare(const ScenarioConfig& cfg, const std::string& out_path, const CommandOptions& options) {
  return guarded(options, [&] {
    const montecarlo::RunOptions run{options.workers};
    std::vector<LabeledCdfs> runs;
    for (auto shape : {geometry::ArrayShape::circular, geometry::ArrayShape::rectangular, geometry::ArrayShape::linear}) {
      ScenarioConfig c = cfg;
      c.array_shape = shape;
      runs.push_back({std::string(geometry::to_string(shape)),
                      montecarlo::run_configured(c, static_cast<std::size_t>(c.n_trials), c.seed, run)});
    }
    write_outputs("geometry-compare", cfg, runs, out_path, options);
    return static_cast<int>(kOk);
  });
}

std::vector<AntennaRow> find_antennas(const ScenarioConfig& cfg, std::span<const double> targets,
                                      const FindOptions& find, unsigned workers) {
  montecarlo::SearchOptions search;
  search.link = find.link;
  search.quantile = find.quantile;
  search.trials_per_eval = find.eval_trials;
  search.confirm_trials = find.confirm_trials;
  search.seed = cfg.seed;
  search.run.workers = workers;
  std::vector<AntennaRow> rows;
  for (double t : targets) rows.push_back({t, montecarlo::find_min_antennas(cfg, t, search)});
  return rows;
}

std::string antenna_csv(const ScenarioConfig& cfg, std::span<const AntennaRow> rows) {
  std::string out = "target_db,M,array_diameter_m\n";
  for (const auto& row : rows) {
    out += fmt("%g", row.target_db);
    if (row.result.attainable) {
      out += ',' + std::to_string(row.result.antennas) + ',';
      out += fmt("%.4f", geometry::circular_diameter(row.result.antennas, cfg.carrier_frequency));
    } else {
      out += ",NA,NA";
    }
    out += '\n';
  }
  return out;
}

int cmd_find_antennas(const ScenarioConfig& cfg, std::span<const double> targets, const std::string& out_path,
                      const FindOptions& find, const CommandOptions& options) {
  return guarded(options, [&] {
    const auto rows = find_antennas(cfg, targets, find, options.workers);
    emit(out_path, antenna_csv(cfg, rows));
    bool all = true;
    for (const auto& row : rows) {
      if (!row.result.attainable) {
        all = false;
        log_of(options) << "target " << row.target_db << " dB unattainable with M <= " << cfg.max_antennas << "\n";
      } else if (!options.quiet) {
        log_of(options) << "target " << row.target_db << " dB: M = " << row.result.antennas << " ("
                        << fmt("%.2f", row.result.achieved_db) << " dB at " << row.result.trials_per_eval
                        << " trials)\n";
      }
    }
    return static_cast<int>(all ? kOk : kUnattainable);
  });
}

std::string bandwidth_csv(const BandwidthArgs& args) {
  namespace bw = losmimo::bandwidth;
  const double n0 = bw::calibrate_noise_density(args.reference_bandwidth, args.reference_power, args.reference_rate);
  const double rho0 = args.reference_power / (args.reference_bandwidth * n0);
  const double limit = bw::capacity_limit(args.reference_power, n0);
  const double decades = std::log10(args.sweep_to / args.sweep_from);
  const int points = static_cast<int>(std::lround(decades * args.points_per_decade));

  std::string out = "bandwidth_hz,capacity_bps,capacity_limit_bps,power_for_proportional_rate_w,pilot_limited_bps\n";
  for (int i = 0; i <= points; ++i) {
    const double b = args.sweep_from * std::pow(10.0, static_cast<double>(i) / args.points_per_decade);
    const double rate = args.reference_rate * (b / args.reference_bandwidth);
    out += fmt("%.6e", b) + ',' + fmt("%.6e", bw::capacity(b, args.reference_power, n0)) + ',' +
           fmt("%.6e", limit) + ',' + fmt("%.6e", bw::power_for_rate(b, rate, n0)) + ',' +
           fmt("%.6e", bw::pilot_limited_throughput(b, rho0, args.reference_bandwidth)) + '\n';
  }
  return out;
}

std::string bandwidth_report(const BandwidthArgs& args) {
  namespace bw = losmimo::bandwidth;
  const double n0 = bw::calibrate_noise_density(args.reference_bandwidth, args.reference_power, args.reference_rate);
  const double rho0 = args.reference_power / (args.reference_bandwidth * n0);
  const double wide = 50.0 * args.reference_bandwidth;
  const auto peak = bw::pilot_limited_peak(rho0, args.reference_bandwidth);
  std::ostringstream os;
  os << "reference: " << args.reference_power << " W over " << args.reference_bandwidth / 1e6 << " MHz carries "
     << args.reference_rate / 1e6 << " Mbit/s (SNR " << fmt("%.4g", rho0) << ", N0 " << fmt("%.4e", n0)
     << " W/Hz)\n"
     << "capacity limit (P/N0) log2(e): " << fmt("%.4e", bw::capacity_limit(args.reference_power, n0))
     << " bit/s\n"
     << "power for 50x rate over 50x bandwidth: " << fmt("%.2f", bw::power_for_rate(wide, 50.0 * args.reference_rate, n0))
     << " W\n"
     << "power for 25x rate over 50x bandwidth: " << fmt("%.2f", bw::power_for_rate(wide, 25.0 * args.reference_rate, n0))
     << " W\n"
     << "pilot-limited throughput peaks at B = " << fmt("%.4e", peak.bandwidth) << " Hz with "
     << fmt("%.4e", peak.throughput) << " bit/s\n";
  return os.str();
}

int cmd_bandwidth(const BandwidthArgs& args, const std::string& out_path, const CommandOptions& options) {
  try {
    if (!(args.reference_bandwidth > 0 && args.reference_power > 0 && args.reference_rate > 0 && args.sweep_from > 0 &&
          args.sweep_to > args.sweep_from && args.points_per_decade > 0))
      throw ConfigError("bandwidth: reference values must be positive and the sweep range increasing");
    emit(out_path, bandwidth_csv(args));
    if (!options.quiet) log_of(options) << bandwidth_report(args);
    return kOk;
  } catch (const ConfigError& e) {
    log_of(options) << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    log_of(options) << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::ios_base::failure& e) {
    log_of(options) << "i/o error: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace losmimo::cli
