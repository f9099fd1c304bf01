#include "wpr/sim.hpp"

#include "wpr/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace wpr {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::string sanitize_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  if (s.size() > 120) s.resize(120);
  return s;
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::goa: return "goa";
    case Algorithm::loa: return "loa";
    default: return "epr";
  }
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "goa") return Algorithm::goa;
  if (s == "loa") return Algorithm::loa;
  if (s == "epr") return Algorithm::epr;
  throw ConfigError("algorithms: unknown algorithm '" + s +
                    "' (expected goa, loa or epr)");
}

void ScenarioConfig::validate() const {
  check(std::isfinite(noise_dbm), "noise_dbm: must be finite");
  check(n_r >= 1, "n_r: must be at least 1");
  check(eta > 0.0 && eta <= 1.0, "eta: must be in (0, 1]");
  check(d_sr > 0.0 && d_dr > 0.0 && d_rd > 0.0,
        "d_sr/d_dr/d_rd: distances must be positive");
  check(!p_s_grid_dbm.empty(), "p_s_grid_dbm: must not be empty");
  check(!p_d_grid_dbm.empty(), "p_d_grid_dbm: must not be empty");
  for (double v : p_s_grid_dbm)
    check(std::isfinite(v), "p_s_grid_dbm: entries must be finite");
  for (double v : p_d_grid_dbm)
    check(std::isfinite(v), "p_d_grid_dbm: entries must be finite");
  check(n_trials >= 1, "n_trials: must be at least 1");
  check(!algorithms.empty(), "algorithms: must not be empty");
  check(epsilon >= 1e-6 && epsilon <= 0.1,
        "epsilon: must lie in [1e-6, 0.1]");
  check(loa_restarts >= 1, "loa_restarts: must be at least 1");
  check(loa_max_iters >= 1, "loa_max_iters: must be at least 1");
  check(std::isfinite(epr_p_r_dbm), "epr_p_r_dbm: must be finite");
  check(!timing_eps_grid.empty(), "timing_eps_grid: must not be empty");
  for (double v : timing_eps_grid)
    check(v >= 1e-6 && v <= 0.1,
          "timing_eps_grid: entries must lie in [1e-6, 0.1]");
  check(timing_trials >= 1, "timing_trials: must be at least 1");
  check(fig2_points >= 2, "fig2_points: must be at least 2");
  check(std::isfinite(fig2_p_s_dbm) && std::isfinite(fig2_p_d_dbm),
        "fig2_p_s_dbm/fig2_p_d_dbm: must be finite");
}

SystemParams make_system_params(const ScenarioConfig& cfg, double p_s_dbm,
                                double p_d_dbm) {
  SystemParams p;
  p.p_s = dbm_to_mw(p_s_dbm);
  p.p_d = dbm_to_mw(p_d_dbm);
  const double noise_mw = dbm_to_mw(cfg.noise_dbm);
  p.sigma_r2 = noise_mw;
  p.sigma_c2 = noise_mw;
  p.sigma_d2 = noise_mw;
  p.eta = cfg.eta;
  p.n_r = cfg.n_r;
  return p;
}

ChannelSet gen_channels(std::uint64_t seed, int trial,
                        const ScenarioConfig& cfg) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
  ChannelSet ch;
  ch.h_sr.resize(cfg.n_r);
  ch.h_dr.resize(cfg.n_r);
  ch.h_rd.resize(cfg.n_r);
  const double v_sr = 1.0 / (cfg.d_sr * cfg.d_sr);
  const double v_dr = 1.0 / (cfg.d_dr * cfg.d_dr);
  const double v_rd = 1.0 / (cfg.d_rd * cfg.d_rd);
  for (int i = 0; i < cfg.n_r; ++i) ch.h_sr(i) = rng.cnormal(v_sr);
  for (int i = 0; i < cfg.n_r; ++i) ch.h_dr(i) = rng.cnormal(v_dr);
  for (int i = 0; i < cfg.n_r; ++i) ch.h_rd(i) = rng.cnormal(v_rd);
  return ch;
}

SolveResult epr_baseline(const SystemParams& p, const ChannelSet& ch,
                         double p_r_fixed_mw) {
  p.validate();
  ch.validate(p.n_r);
  if (!(p_r_fixed_mw >= 0.0))
    throw std::invalid_argument("epr_baseline: budget must be nonnegative");
  const auto t0 = clock_type::now();
  const PsRatio rho0(0.0);
  const InnerProblem ip = make_inner_problem(rho0, p, ch, p_r_fixed_mw);
  const InnerSolution sol = solve_inner_closed(ip);

  SolveResult res;
  res.rho_star = rho0;
  res.f_star = Beamformer::from_vec(sol.f, p.n_r);
  res.objective = (1.0 + sol.ratio) / relay_capacity_factor(rho0, p, ch);
  res.secrecy_rate = 0.5 * std::max(0.0, std::log2(res.objective));
  res.relay_power_mw = relay_power_used(res.f_star, rho0, p, ch);
  res.diagnostics.route = "closed";
  res.diagnostics.wall_time_s = seconds_since(t0);
  return res;
}

std::vector<SweepRecord> run_sweep(const ScenarioConfig& cfg, int threads) {
  cfg.validate();

  struct Cell {
    double p_s_dbm, p_d_dbm;
    Algorithm alg;
    int trial;
  };
  std::vector<Cell> cells;
  for (double ps : cfg.p_s_grid_dbm)
    for (double pd : cfg.p_d_grid_dbm)
      for (Algorithm alg : cfg.algorithms)
        for (int t = 0; t < cfg.n_trials; ++t)
          cells.push_back({ps, pd, alg, t});

  std::vector<SweepRecord> records(cells.size());
  const double epr_budget = dbm_to_mw(cfg.epr_p_r_dbm);

  auto run_one = [&](size_t idx) {
    const Cell& c = cells[idx];
    SweepRecord rec;
    rec.p_s_dbm = c.p_s_dbm;
    rec.p_d_dbm = c.p_d_dbm;
    rec.algorithm = c.alg;
    rec.trial = c.trial;
    const auto t0 = clock_type::now();
    try {
      const SystemParams p = make_system_params(cfg, c.p_s_dbm, c.p_d_dbm);
      const ChannelSet ch = gen_channels(cfg.seed, c.trial, cfg);
      SolveResult sol;
      switch (c.alg) {
        case Algorithm::goa:
          sol = goa(p, ch, cfg.epsilon);
          break;
        case Algorithm::loa: {
          LoaConfig lc;
          lc.epsilon = cfg.epsilon;
          lc.j_restarts = cfg.loa_restarts;
          lc.max_iters = cfg.loa_max_iters;
          lc.seed = mix_seed(cfg.seed, 1000003ULL + c.trial);
          sol = loa(p, ch, lc);
          break;
        }
        case Algorithm::epr:
          sol = epr_baseline(p, ch, epr_budget);
          break;
      }
      rec.secrecy_rate_bps_hz = sol.secrecy_rate;
      rec.relay_power_mw = sol.relay_power_mw;
      rec.rho_star = sol.rho_star.value();
      rec.status = "ok";
    } catch (const std::exception& e) {
      rec.status = sanitize_status(std::string("error: ") + e.what());
    }
    rec.wall_time_s = seconds_since(t0);
    records[idx] = std::move(rec);
  };

  const int n_workers = std::max(
      1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (n_workers == 1) {
    for (size_t i = 0; i < cells.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1))
          run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<TimingRow> timing_experiment(const ScenarioConfig& cfg) {
  cfg.validate();
  const double ps = cfg.p_s_grid_dbm[cfg.p_s_grid_dbm.size() / 2];
  const double pd = cfg.p_d_grid_dbm.front();
  const SystemParams p = make_system_params(cfg, ps, pd);

  std::vector<TimingRow> rows;
  for (double eps : cfg.timing_eps_grid) {
    for (Algorithm alg : {Algorithm::goa, Algorithm::loa}) {
      TimingRow row;
      row.algorithm = alg;
      row.epsilon = eps;
      row.n_trials = cfg.timing_trials;
      double wall = 0.0, rate = 0.0;
      for (int t = 0; t < cfg.timing_trials; ++t) {
        const ChannelSet ch = gen_channels(cfg.seed, t, cfg);
        const auto t0 = clock_type::now();
        SolveResult sol;
        if (alg == Algorithm::goa) {
          sol = goa(p, ch, eps, InnerRoute::sdr);
        } else {
          LoaConfig lc;
          lc.epsilon = eps;
          lc.j_restarts = cfg.loa_restarts;
          lc.max_iters = cfg.loa_max_iters;
          lc.seed = mix_seed(cfg.seed, 1000003ULL + t);
          lc.route = InnerRoute::sdr;
          sol = loa(p, ch, lc);
        }
        wall += seconds_since(t0);
        rate += sol.secrecy_rate;
      }
      row.mean_wall_s = wall / cfg.timing_trials;
      row.mean_secrecy = rate / cfg.timing_trials;
      rows.push_back(row);
    }
  }
  return rows;
}

Fig2Trace fig2_trace(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.n_r != 1)
    throw ConfigError("n_r: the rate profile requires exactly one relay antenna");
  const SystemParams p =
      make_system_params(cfg, cfg.fig2_p_s_dbm, cfg.fig2_p_d_dbm);
  const ChannelSet ch = gen_channels(cfg.seed, 0, cfg);
  SingleAntennaResult sar = single_antenna_optimize(p, ch, cfg.fig2_points);

  Fig2Trace out;
  out.points = std::move(sar.trace);
  out.optimum = sar.optimum;
  out.result = sar.result;
  return out;
}

}  // namespace wpr
