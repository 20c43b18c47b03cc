// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero if
// any selected criterion fails. Usage: losmimo_acceptance [id...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "losmimo/bandwidth.hpp"
#include "losmimo/commands.hpp"
#include "losmimo/montecarlo.hpp"
#include "losmimo/power_control.hpp"
#include "losmimo/zf_core.hpp"
#include "oracles.hpp"

using namespace losmimo;
using montecarlo::Link;

namespace {

// Fixed for every stochastic criterion; chosen before any run.
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

ScenarioConfig pcs(int m) {
  ScenarioConfig c;
  c.carrier_frequency = 1.9e9;
  c.antennas = m;
  c.seed = kSeed;
  return c;
}

ScenarioConfig mmwave(int m) {
  ScenarioConfig c = pcs(m);
  c.carrier_frequency = 60e9;
  return c;
}

double round_sig2(double x) {
  const double e = std::floor(std::log10(std::abs(x))) - 1;
  return std::round(x / std::pow(10.0, e)) * std::pow(10.0, e);
}

Outcome diameters() {
  struct Row {
    double fc;
    int m;
    double printed;
  };
  const Row rows[] = {{1.9e9, 33, 0.83},  {1.9e9, 40, 1.0},   {1.9e9, 54, 1.4},   {1.9e9, 64, 1.6},
                      {1.9e9, 90, 2.3},   {1.9e9, 110, 2.8},  {60e9, 160, 0.13},  {60e9, 250, 0.20},
                      {60e9, 360, 0.29},  {60e9, 560, 0.45},  {60e9, 1100, 0.87}, {60e9, 4000, 3.2}};
  Outcome o{true, ""};
  for (const auto& r : rows) {
    const double d = geometry::circular_diameter(r.m, r.fc);
    if (std::abs(round_sig2(d) - r.printed) > 1e-9) {
      o.pass = false;
      o.detail += "M=" + std::to_string(r.m) + " gives " + fmt("%.4f", d) + " ";
    }
  }
  if (o.pass) o.detail = "12 of 12 rows match to 2 significant figures";
  return o;
}

Outcome antenna_counts() {
  struct Row {
    bool mm;
    double target;
    int expected;
  };
  const Row rows[] = {{false, 5, 33}, {false, 10, 40}, {false, 15, 54}, {false, 20, 64},
                      {false, 25, 90}, {true, 5, 160},  {true, 10, 250}};
  Outcome o{true, ""};
  for (const auto& r : rows) {
    const auto cfg = r.mm ? mmwave(128) : pcs(128);
    montecarlo::SearchOptions opt;
    opt.trials_per_eval = 2000;
    opt.confirm_trials = 2000;
    opt.seed = kSeed;
    const auto res = montecarlo::find_min_antennas(cfg, r.target, opt);
    const bool ok = res.attainable && std::abs(res.antennas - r.expected) <= 0.15 * r.expected;
    o.pass = o.pass && ok;
    o.detail += std::string(r.mm ? "mm" : "pcs") + fmt("@%.0fdB:", r.target) + std::to_string(res.antennas) + "/" +
                std::to_string(r.expected) + (ok ? " " : "(!) ");
  }
  return o;
}

// Downlink runs shared by the anchor and imbalance checks.
const montecarlo::LinkCdfs& pcs128_single() {
  static const auto r = montecarlo::run_trials(pcs(128), 2000, kSeed);
  return r;
}

Outcome downlink_anchor() {
  const double a = montecarlo::percentile(pcs128_single().downlink, 0.05);
  const double b = montecarlo::percentile(montecarlo::run_trials(mmwave(20000), 2000, kSeed).downlink, 0.05);
  const bool ok = std::abs(a - 38.0) <= 1.5 && std::abs(b - 38.0) <= 1.5;
  return {ok, "PCS M=128 " + fmt("%.2f", a) + " dB, mmWave M=20000 " + fmt("%.2f", b) + " dB (38 +/- 1.5)"};
}

Outcome multicell_anchor() {
  auto p = pcs(128);
  p.layout = CellLayoutKind::seven_cell;
  auto m = mmwave(215);
  m.layout = CellLayoutKind::seven_cell;
  const auto rp = montecarlo::run_multicell(p, 1000, kSeed);
  const auto rm = montecarlo::run_multicell(m, 1000, kSeed);
  const double pu = montecarlo::percentile(rp.uplink, 0.05);
  const double pd = montecarlo::percentile(rp.downlink, 0.05);
  const double mu = montecarlo::percentile(rm.uplink, 0.05);
  const double md = montecarlo::percentile(rm.downlink, 0.05);
  const bool ok = std::abs(pu - mu) <= 1.5 && std::abs(pu - pd) <= 0.5;
  return {ok, "uplink p5 PCS " + fmt("%.2f", pu) + " vs mmWave " + fmt("%.2f", mu) + " dB; PCS downlink p5 " +
                  fmt("%.2f", pd) + " dB (mmWave downlink " + fmt("%.2f", md) + " dB)"};
}

Outcome power_imbalance() {
  const int m = 128, k = 18;
  const double beta = channel::path_gain(100.0, wavelength(1.9e9));
  channel::ChannelMatrix g(m, k, wavelength(1.9e9));
  // 18 orthogonal DFT columns of length 128, each with norm^2 M beta
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < m; ++r) g(r, c) = std::sqrt(beta) * std::polar(1.0, 2.0 * std::numbers::pi * r * c / m);
  const auto diag = zf::zf_diagnostics(g);
  const double sigma2 = channel::noise_power(50e6, 9.0);
  const double ul = power::maxmin_uplink_single(diag, sigma2, 0.2).achieved_sinr;
  const double dl = power::maxmin_downlink_single(diag, sigma2, 2.0).achieved_sinr;
  const double gap = channel::to_db(ul) - channel::to_db(dl);
  const double want = 10.0 * std::log10(1.8);
  const auto& sim = pcs128_single();
  const double sim_gap = montecarlo::percentile(sim.uplink, 0.05) - montecarlo::percentile(sim.downlink, 0.05);
  const bool ok = std::abs(gap - want) <= 1e-6 && sim_gap < 2.56;
  return {ok, "synthetic gap " + fmt("%.9f", gap) + " dB (want " + fmt("%.9f", want) + "), simulated p5 gap " +
                  fmt("%.3f", sim_gap) + " dB (< 2.56)"};
}

Outcome solver_oracles() {
  std::mt19937_64 gen(kSeed);
  std::uniform_int_distribution<int> kd(1, 8);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int k = kd(gen);
    const int m = std::uniform_int_distribution<int>(k, 64)(gen);
    const auto diag = zf::zf_diagnostics(oracle::random_channel(gen, m, k, 1e-4));
    const double sigma2 = channel::noise_power(50e6, 9.0);
    const double ul = power::maxmin_uplink_single(diag, sigma2, 0.2).achieved_sinr;
    const double dl = power::maxmin_downlink_single(diag, sigma2, 2.0).achieved_sinr;
    worst = std::max(worst, std::abs(ul / oracle::uplink_maxmin(diag.inv_gram_diag, sigma2, 0.2) - 1.0));
    worst = std::max(worst, std::abs(dl / oracle::downlink_maxmin(diag.inv_gram_diag, sigma2, 2.0) - 1.0));
  }
  double worst_mc = 0.0;
  {
    const double g = 4.0, c = 0.3, sigma2 = 0.5, p = 2.0;
    power::CouplingMatrix cm(2);
    cm(0, 1) = cm(1, 0) = c;
    const std::vector<double> n2{1.0 / g, 1.0 / g};
    const std::vector<int> cells{0, 1};
    const double want = g * p / (sigma2 + c * p);
    worst_mc = std::max(worst_mc, std::abs(power::maxmin_uplink_multicell(n2, cm, cells, sigma2, p).achieved_sinr / want - 1.0));
    worst_mc = std::max(worst_mc, std::abs(power::maxmin_downlink_multicell(n2, cm, cells, sigma2, p).achieved_sinr / want - 1.0));
  }
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double d0 = u(gen), d1 = u(gen), c01 = 0.3 * u(gen), c10 = 0.3 * u(gen), sigma2 = 0.1 * u(gen), p = u(gen);
    power::CouplingMatrix cm(2);
    cm(0, 1) = c01;
    cm(1, 0) = c10;
    const std::vector<double> n2{d0, d1};
    const std::vector<int> cells{0, 1};
    const double want = oracle::two_cell_maxmin(d0, d1, c01, c10, sigma2, p);
    worst_mc = std::max(worst_mc, std::abs(power::maxmin_downlink_multicell(n2, cm, cells, sigma2, p).achieved_sinr / want - 1.0));
    worst_mc = std::max(worst_mc, std::abs(power::maxmin_uplink_multicell(n2, cm, cells, sigma2, p).achieved_sinr / want - 1.0));
  }
  return {worst <= 1e-6 && worst_mc <= 1e-6,
          "single-cell worst rel err " + fmt("%.2e", worst) + ", two-cell worst rel err " + fmt("%.2e", worst_mc)};
}

Outcome zf_bruteforce() {
  std::mt19937_64 gen(kSeed);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int k = std::uniform_int_distribution<int>(1, 4)(gen);
    const int m = std::uniform_int_distribution<int>(k, 16)(gen);
    const auto g = oracle::random_channel(gen, m, k);
    const auto a = oracle::from_channel(g);
    const auto gram = oracle::multiply(oracle::adjoint(a), a);
    const auto w = oracle::pinv_columns(a);
    const auto diag = zf::zf_diagnostics(g);
    const auto pre = zf::zf_precoders(g);
    double scale = 0.0;
    for (int i = 0; i < k; ++i) scale = std::max(scale, gram[i][i].real());
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) worst = std::max(worst, std::abs(diag.gram(i, j) - gram[i][j]) / scale);
      const double wn2 = oracle::column_norm2(w, i);
      worst = std::max(worst, std::abs(diag.inv_gram_diag[i] / wn2 - 1.0));
      worst = std::max(worst, std::abs(zf::zf_uplink_gain(diag, i) * wn2 - 1.0));
      worst = std::max(worst, std::abs(pre.norms[i] / std::sqrt(wn2) - 1.0));
      for (int r = 0; r < m; ++r)
        worst = std::max(worst, std::abs(pre.directions(r, i) - w[r][i] / std::sqrt(wn2)));
    }
  }
  return {worst <= 1e-9, "1000 instances, worst deviation " + fmt("%.2e", worst)};
}

Outcome geometry_ordering() {
  double v[3];
  const geometry::ArrayShape shapes[] = {geometry::ArrayShape::circular, geometry::ArrayShape::rectangular,
                                         geometry::ArrayShape::linear};
  for (int i = 0; i < 3; ++i) {
    auto cfg = pcs(128);
    cfg.array_shape = shapes[i];
    v[i] = montecarlo::quantile_at(cfg, 128, Link::uplink, 0.05, 2000, kSeed);
  }
  const bool ok = v[0] - v[1] > 1.0 && v[1] - v[2] > 1.0;
  return {ok, "uplink p5 circular " + fmt("%.2f", v[0]) + ", rectangular " + fmt("%.2f", v[1]) + ", linear " +
                  fmt("%.2f", v[2]) + " dB"};
}

Outcome bandwidth_numbers() {
  const double n0 = bandwidth::calibrate_noise_density(20e6, 10.0, 60e6);
  const double p131 = bandwidth::power_for_rate(1e9, 25 * 60e6, n0);
  const double p500 = bandwidth::power_for_rate(1e9, 50 * 60e6, n0);
  const double limit = bandwidth::capacity_limit(10.0, n0);
  bool bounded = true;
  for (double e = 0.0; e <= 12.0; e += 0.01) bounded = bounded && bandwidth::capacity(std::pow(10.0, e), 10.0, n0) < limit;
  const bool ok = std::abs(p131 / 131.0 - 1.0) <= 0.01 && std::abs(p500 - 500.0) <= 1e-9 * 500.0 && bounded;
  return {ok, "1 GHz at 25x rate " + fmt("%.2f", p131) + " W, 50x rate " + fmt("%.9f", p500) + " W, bound " +
                  (bounded ? "holds" : "violated") + " over 1 Hz..1 THz"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "losmimo_acceptance";
  std::filesystem::create_directories(dir);
  std::ostringstream sink;
  std::vector<std::string> bad;
  auto compare = [&](const std::string& name, const std::function<int(const std::string&, unsigned)>& run) {
    const auto a = (dir / (name + "_w1.csv")).string();
    const auto b = (dir / (name + "_w8.csv")).string();
    const int ra = run(a, 1);
    const int rb = run(b, 8);
    if (ra != rb || slurp(a).empty() || slurp(a) != slurp(b)) bad.push_back(name);
  };
  auto cfg = pcs(64);
  cfg.n_trials = 200;
  compare("simulate", [&](const std::string& out, unsigned w) {
    return cli::cmd_simulate(cfg, out, {true, w, &sink});
  });
  auto mc = pcs(64);
  mc.n_trials = 20;
  compare("simulate-multicell", [&](const std::string& out, unsigned w) {
    return cli::cmd_simulate(mc, out, {true, w, &sink}, true);
  });
  compare("geometry-compare", [&](const std::string& out, unsigned w) {
    return cli::cmd_geometry_compare(cfg, out, {true, w, &sink});
  });
  const std::vector<double> targets{5.0, 15.0};
  cli::FindOptions find;
  find.eval_trials = 200;
  find.confirm_trials = 400;
  compare("find-antennas", [&](const std::string& out, unsigned w) {
    return cli::cmd_find_antennas(cfg, targets, out, find, {true, w, &sink});
  });
  compare("bandwidth", [&](const std::string& out, unsigned w) {
    return cli::cmd_bandwidth({}, out, {true, w, &sink});
  });
  std::string detail = bad.empty() ? "5 commands byte-identical with 1 and 8 workers" : "differs:";
  for (const auto& b : bad) detail += " " + b;
  return {bad.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "diameter formula", diameters},
    {2, "antenna counts", antenna_counts},
    {3, "single-cell downlink anchor", downlink_anchor},
    {4, "multi-cell anchor", multicell_anchor},
    {5, "uplink/downlink power imbalance", power_imbalance},
    {6, "solver oracle equivalence", solver_oracles},
    {7, "zero-forcing brute force", zf_bruteforce},
    {8, "array geometry ordering", geometry_ordering},
    {9, "bandwidth numbers", bandwidth_numbers},
    {10, "determinism across workers", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
