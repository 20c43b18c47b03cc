// SPDX-License-Identifier: Apache-2.0

#include "losmimo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "losmimo/errors.hpp"
#include "losmimo/geometry.hpp"
#include "losmimo/rng.hpp"
#include "losmimo/zf_core.hpp"

namespace losmimo::montecarlo {

std::string_view to_string(Link link) { return link == Link::uplink ? "uplink" : "downlink"; }

CdfSummary make_cdf(std::vector<double> samples_db, std::size_t degenerate_redraws) {
  std::sort(samples_db.begin(), samples_db.end());
  CdfSummary cdf;
  cdf.n_trials = samples_db.size();
  cdf.sorted_samples = std::move(samples_db);
  cdf.n_degenerate_redraws = degenerate_redraws;
  return cdf;
}

double percentile(const CdfSummary& cdf, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("percentile: q must lie in (0, 1)");
  const auto& s = cdf.sorted_samples;
  if (s.size() < 2) throw std::domain_error("percentile: needs at least two samples");
  const double pos = q * static_cast<double>(s.size() - 1);  // zero-based rank
  const auto below = static_cast<std::size_t>(std::floor(pos));
  if (below + 1 >= s.size()) return s.back();
  const double frac = pos - static_cast<double>(below);
  return s[below] + frac * (s[below + 1] - s[below]);
}

unsigned default_workers() {
  if (const char* env = std::getenv("LOSMIMO_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  // Rethrow the lowest-index failure so the reported error is schedule independent.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

struct Prepared {
  geometry::CellLayout cells;
  std::vector<geometry::ArrayLayout> arrays;
  double noise_uplink = 0.0;
  double noise_downlink = 0.0;
};

Prepared prepare(const ScenarioConfig& cfg, bool seven_cells) {
  validate(cfg);
  Prepared p;
  p.cells = seven_cells ? geometry::build_seven_cells(cfg.cell_radius, cfg.intersite)
                        : geometry::build_single_cell(cfg.cell_radius);
  const geometry::ArrayOptions opts{cfg.rect_rows};
  for (const auto& center : p.cells.centers)
    p.arrays.push_back(
        geometry::build_array(cfg.array_shape, cfg.antennas, cfg.carrier_frequency, center, cfg.bs_height, opts));
  p.noise_uplink = channel::noise_power(cfg.bandwidth, cfg.noise_figure_bs);
  p.noise_downlink = channel::noise_power(cfg.bandwidth, cfg.noise_figure_terminal);
  return p;
}

struct TrialOutcome {
  double uplink_db = 0.0;
  double downlink_db = 0.0;
  std::size_t redraws = 0;
};

std::size_t redraw_budget(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

[[noreturn]] void degenerate_abort(std::size_t redraws, std::size_t n, std::size_t budget) {
  throw DegenerateTrialsError(std::to_string(redraws) + " degenerate redraws in " + std::to_string(n) +
                              " trials exceeds the allowed " + std::to_string(budget));
}

TrialOutcome single_cell_trial(const ScenarioConfig& cfg, const Prepared& p, Rng& rng, std::size_t budget) {
  TrialOutcome out;
  const auto& array = p.arrays.front();
  const Vec2 center = p.cells.centers.front();
  for (;;) {
    const auto placement =
        geometry::place_terminals(rng, cfg.terminals, center, cfg.cell_radius, cfg.terminal_height);
    const auto g = channel::los_channel(array, placement, cfg.amplitude_mode);
    try {
      const auto diag = zf::zf_diagnostics(g);
      out.uplink_db = channel::to_db(power::maxmin_uplink_single(diag, p.noise_uplink, cfg.ul_max_power).achieved_sinr);
      out.downlink_db = channel::to_db(power::maxmin_downlink_single(diag, p.noise_downlink, cfg.dl_power).achieved_sinr);
      return out;
    } catch (const SingularChannelError&) {
      if (++out.redraws > budget) return out;
    }
  }
}

// |a^H g|^2 for two length-M columns.
double projected_power(std::span<const channel::cplx> a, std::span<const channel::cplx> g) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    re += a[m].real() * g[m].real() + a[m].imag() * g[m].imag();
    im += a[m].real() * g[m].imag() - a[m].imag() * g[m].real();
  }
  return re * re + im * im;
}

TrialOutcome multicell_trial(const ScenarioConfig& cfg, const Prepared& p, Rng& rng, std::size_t budget,
                             const power::SolverOptions& solver) {
  TrialOutcome out;
  const std::size_t cells = p.cells.size();
  const auto k_per_cell = static_cast<std::size_t>(cfg.terminals);
  const std::size_t total = cells * k_per_cell;

  for (;;) {
    geometry::TerminalPlacement placement;
    placement.positions.reserve(total);
    for (std::size_t c = 0; c < cells; ++c)
      geometry::place_terminals(rng, cfg.terminals, p.cells.centers[c], static_cast<int>(c), cfg.cell_radius,
                                cfg.terminal_height, placement);

    std::vector<double> norm2(total);
    power::CouplingMatrix uplink(total);
    power::CouplingMatrix downlink(total);
    try {
      for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t first = c * k_per_cell;
        const std::span<const Vec3> own(placement.positions.data() + first, k_per_cell);
        const auto g_own = channel::los_channel(p.arrays[c], own, cfg.amplitude_mode);
        const auto diag = zf::zf_diagnostics(g_own);
        for (std::size_t i = 0; i < k_per_cell; ++i) norm2[first + i] = diag.inv_gram_diag[i];
        if (cells == 1) continue;

        const auto pre = zf::zf_precoders(g_own);
        const auto g_all = channel::los_channel(p.arrays[c], placement.positions, cfg.amplitude_mode);
        for (std::size_t i = 0; i < k_per_cell; ++i) {
          const auto a = pre.directions.column(i);
          for (std::size_t j = 0; j < total; ++j) {
            if (static_cast<std::size_t>(placement.cell_index[j]) == c) continue;
            const double x = projected_power(a, g_all.column(j));
            uplink(first + i, j) = x;    // receiver of i picks up foreign terminal j
            downlink(j, first + i) = x;  // foreign terminal j hears precoder of i
          }
        }
      }
    } catch (const SingularChannelError&) {
      if (++out.redraws > budget) return out;
      continue;
    }

    const auto ul = power::maxmin_uplink_multicell(norm2, uplink, placement.cell_index, p.noise_uplink,
                                                   cfg.ul_max_power, solver);
    const auto dl = power::maxmin_downlink_multicell(norm2, downlink, placement.cell_index, p.noise_downlink,
                                                     cfg.dl_power, solver);
    out.uplink_db = channel::to_db(ul.achieved_sinr);
    out.downlink_db = channel::to_db(dl.achieved_sinr);
    return out;
  }
}

template <typename Trial>
LinkCdfs run(std::size_t n, std::uint64_t seed, const RunOptions& options, Trial&& trial) {
  if (n < 1) throw ConfigError("trial count must be >= 1");
  const std::size_t budget = redraw_budget(n, options.max_degenerate_fraction);
  std::vector<TrialOutcome> outcomes(n);
  parallel_for(n, options.workers, [&](std::size_t t) {
    Rng rng = Rng::for_trial(seed, t);
    outcomes[t] = trial(rng, budget);
  });

  std::size_t redraws = 0;
  std::vector<double> ul(n), dl(n);
  for (std::size_t t = 0; t < n; ++t) {
    redraws += outcomes[t].redraws;
    ul[t] = outcomes[t].uplink_db;
    dl[t] = outcomes[t].downlink_db;
  }
  if (redraws > budget) degenerate_abort(redraws, n, budget);
  return {make_cdf(std::move(ul), redraws), make_cdf(std::move(dl), redraws)};
}

}  // namespace

LinkCdfs run_trials(const ScenarioConfig& cfg, std::size_t n, std::uint64_t seed, const RunOptions& options) {
  const Prepared p = prepare(cfg, false);
  return run(n, seed, options, [&](Rng& rng, std::size_t budget) { return single_cell_trial(cfg, p, rng, budget); });
}

LinkCdfs run_multicell(const ScenarioConfig& cfg, std::size_t n, std::uint64_t seed, const RunOptions& options,
                       const power::SolverOptions& solver) {
  const Prepared p = prepare(cfg, cfg.layout == CellLayoutKind::seven_cell);
  return run(n, seed, options,
             [&](Rng& rng, std::size_t budget) { return multicell_trial(cfg, p, rng, budget, solver); });
}

LinkCdfs run_configured(const ScenarioConfig& cfg, std::size_t n, std::uint64_t seed, const RunOptions& options) {
  return cfg.layout == CellLayoutKind::seven_cell ? run_multicell(cfg, n, seed, options)
                                                  : run_trials(cfg, n, seed, options);
}

double quantile_at(const ScenarioConfig& cfg, int antennas, Link link, double quantile, std::size_t n,
                   std::uint64_t seed, const RunOptions& options) {
  ScenarioConfig c = cfg;
  c.antennas = antennas;
  return percentile(run_configured(c, n, seed, options)[link], quantile);
}

SearchResult find_min_antennas(const ScenarioConfig& cfg, double target_db, const SearchOptions& options) {
  validate(cfg);
  const int k = cfg.terminals;
  const int max_m = cfg.max_antennas;

  SearchResult res;
  res.target_db = target_db;
  res.quantile = options.quantile;
  res.trials_per_eval = options.trials_per_eval;

  // Any full-rank system has positive SINR, so a -inf dB target is met at M = K.
  if (std::isinf(target_db) && target_db < 0.0) {
    res.attainable = true;
    res.antennas = k;
    res.bracket_low = k - 1;
    res.bracket_high = k;
    return res;
  }

  std::map<std::pair<int, std::size_t>, double> cache;
  auto value = [&](int m, std::size_t n) {
    const auto key = std::make_pair(m, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    double q = -std::numeric_limits<double>::infinity();
    try {
      q = quantile_at(cfg, m, options.link, options.quantile, n, options.seed, options.run);
    } catch (const DegenerateTrialsError&) {
      // Too ill-conditioned to serve everyone reliably: counts as a miss.
    }
    cache.emplace(key, q);
    return q;
  };
  auto meets = [&](int m, std::size_t n) { return value(m, n) >= target_db; };

  const std::size_t n = options.trials_per_eval;
  int lo = k - 1;
  int hi = k;
  while (!meets(hi, n)) {
    lo = hi;
    if (hi >= max_m) {
      res.bracket_low = lo;
      res.bracket_high = max_m;
      res.achieved_db = value(hi, n);
      return res;
    }
    hi = std::min(2 * hi, max_m);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (meets(mid, n))
      hi = mid;
    else
      lo = mid;
  }

  std::size_t final_n = n;
  if (options.confirm_trials > 0 && options.confirm_trials != n) {
    final_n = options.confirm_trials;
    res.trials_per_eval = final_n;
    while (!meets(hi, final_n)) {
      if (hi >= max_m) {
        res.bracket_low = hi;
        res.bracket_high = max_m;
        res.achieved_db = value(hi, final_n);
        return res;
      }
      ++hi;
    }
    while (hi > k && meets(hi - 1, final_n)) --hi;
    lo = hi - 1;
  }

  res.attainable = true;
  res.antennas = hi;
  res.bracket_low = lo;
  res.bracket_high = hi;
  res.achieved_db = value(hi, final_n);
  return res;
}

}  // namespace losmimo::montecarlo
