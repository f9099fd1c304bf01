#include "wpr/config.hpp"
#include "wpr/csv.hpp"
#include "wpr/rng.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw wpr::IoError("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw wpr::IoError("cannot create output directory " + dir.string());
}

int cmd_single(const wpr::ScenarioConfig& cfg, const std::string& alg_name,
               double ps_dbm, double pd_dbm, int trial) {
  const wpr::Algorithm alg = wpr::algorithm_from_string(alg_name);
  const wpr::SystemParams p = wpr::make_system_params(cfg, ps_dbm, pd_dbm);
  const wpr::ChannelSet ch = wpr::gen_channels(cfg.seed, trial, cfg);

  wpr::SolveResult sol;
  switch (alg) {
    case wpr::Algorithm::goa:
      sol = wpr::goa(p, ch, cfg.epsilon);
      break;
    case wpr::Algorithm::loa: {
      wpr::LoaConfig lc;
      lc.epsilon = cfg.epsilon;
      lc.j_restarts = cfg.loa_restarts;
      lc.max_iters = cfg.loa_max_iters;
      lc.seed = wpr::mix_seed(cfg.seed, 1000003ULL + trial);
      sol = wpr::loa(p, ch, lc);
      break;
    }
    case wpr::Algorithm::epr:
      sol = wpr::epr_baseline(p, ch, wpr::dbm_to_mw(cfg.epr_p_r_dbm));
      break;
  }

  wpr::csv_row(std::cout,
               {"p_s_dbm", "p_d_dbm", "algorithm", "trial", "seed",
                "rho_star", "secrecy_rate_bps_hz", "relay_power_mw",
                "objective", "iterations", "status"});
  wpr::csv_row(std::cout,
               {wpr::csv_num(ps_dbm), wpr::csv_num(pd_dbm),
                wpr::to_string(alg), wpr::csv_num(trial),
                std::to_string(cfg.seed), wpr::csv_num(sol.rho_star.value()),
                wpr::csv_num(sol.secrecy_rate),
                wpr::csv_num(sol.relay_power_mw), wpr::csv_num(sol.objective),
                wpr::csv_num(sol.diagnostics.iterations), "ok"});
  std::cerr << "wall_time_s=" << sol.diagnostics.wall_time_s << "\n";
  return kExitOk;
}

int cmd_sweep(const wpr::ScenarioConfig& cfg, const std::string& out_dir,
              int threads) {
  ensure_dir(out_dir);
  const auto records = wpr::run_sweep(cfg, threads);

  size_t failed = 0;
  auto out = open_output(fs::path(out_dir) / "sweep.csv");
  wpr::csv_row(out, {"p_s_dbm", "p_d_dbm", "algorithm", "trial",
                     "secrecy_rate_bps_hz", "relay_power_mw", "rho_star",
                     "wall_time_s", "status"});
  for (const auto& r : records) {
    if (r.status != "ok") ++failed;
    wpr::csv_row(out, {wpr::csv_num(r.p_s_dbm), wpr::csv_num(r.p_d_dbm),
                       wpr::to_string(r.algorithm), wpr::csv_num(r.trial),
                       wpr::csv_num(r.secrecy_rate_bps_hz),
                       wpr::csv_num(r.relay_power_mw),
                       wpr::csv_num(r.rho_star), wpr::csv_num(r.wall_time_s),
                       r.status});
  }

  wpr::write_manifest((fs::path(out_dir) / "manifest.json").string(),
                      {"sweep", cfg, threads, out_dir});
  std::cout << "wrote " << records.size() << " records ("
            << records.size() - failed << " ok, " << failed
            << " failed) to " << (fs::path(out_dir) / "sweep.csv").string()
            << "\n";
  if (failed == records.size() && !records.empty()) return kExitSolver;
  return kExitOk;
}

int cmd_fig2(wpr::ScenarioConfig cfg, const std::string& out_dir) {
  cfg.n_r = 1;  // the rate-profile figure is a single-antenna construct
  ensure_dir(out_dir);
  const wpr::Fig2Trace trace = wpr::fig2_trace(cfg);

  auto out = open_output(fs::path(out_dir) / "fig2.csv");
  wpr::csv_row(out, {"rho", "r_sr", "dr_sr_drho"});
  for (const auto& pt : trace.points)
    wpr::csv_row(out, {wpr::csv_num(pt.rho), wpr::csv_num(pt.r_sr),
                       wpr::csv_num(pt.dr_sr_drho)});
  // The located optimum goes last so plots can star it.
  wpr::csv_row(out, {wpr::csv_num(trace.optimum.rho),
                     wpr::csv_num(trace.optimum.r_sr),
                     wpr::csv_num(trace.optimum.dr_sr_drho)});

  wpr::write_manifest((fs::path(out_dir) / "manifest.json").string(),
                      {"fig2", cfg, 1, out_dir});
  std::cout << "wrote " << trace.points.size() + 1 << " rows to "
            << (fs::path(out_dir) / "fig2.csv").string() << " (optimum at rho="
            << wpr::csv_num(trace.optimum.rho) << ")\n";
  return kExitOk;
}

int cmd_timing(const wpr::ScenarioConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto rows = wpr::timing_experiment(cfg);

  auto out = open_output(fs::path(out_dir) / "timing.csv");
  wpr::csv_row(out, {"algorithm", "epsilon", "n_trials", "mean_wall_s",
                     "mean_secrecy"});
  for (const auto& r : rows)
    wpr::csv_row(out, {wpr::to_string(r.algorithm), wpr::csv_num(r.epsilon),
                       wpr::csv_num(r.n_trials), wpr::csv_num(r.mean_wall_s),
                       wpr::csv_num(r.mean_secrecy)});

  wpr::write_manifest((fs::path(out_dir) / "manifest.json").string(),
                      {"timing", cfg, 1, out_dir});
  std::cout << "wrote " << rows.size() << " rows to "
            << (fs::path(out_dir) / "timing.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wprsec: secrecy-rate optimization for a wireless-powered untrusted "
      "amplify-and-forward relay"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  int threads = 1;
  app.add_option("--config", config_path,
                 "Scenario JSON file (or a manifest from a previous run)");
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
  auto* eps_opt =
      app.add_option("--epsilon", epsilon, "Override the solver accuracy");
  app.add_option("--threads", threads, "Worker threads for sweeps")
      ->check(CLI::Range(1, 1024));

  auto* single = app.add_subcommand("single", "Solve one instance, CSV to stdout");
  std::string alg_name = "goa";
  double ps_dbm = 40.0, pd_dbm = 40.0;
  int trial = 0;
  single->add_option("--alg", alg_name, "Algorithm: goa, loa or epr");
  single->add_option("--ps-dbm", ps_dbm, "Source power (dBm)");
  single->add_option("--pd-dbm", pd_dbm, "Destination power (dBm)");
  single->add_option("--trial", trial, "Channel draw index")
      ->check(CLI::NonNegativeNumber);

  auto* sweep = app.add_subcommand(
      "sweep", "Power-grid Monte Carlo sweep; writes sweep.csv + manifest.json");
  auto* fig2 = app.add_subcommand(
      "fig2", "Single-antenna rate profile; writes fig2.csv + manifest.json");
  int fig2_points = 0;
  fig2->add_option("--points", fig2_points, "Grid points in the profile")
      ->check(CLI::Range(2, 10000000));
  auto* timing = app.add_subcommand(
      "timing", "Wall-clock comparison across accuracies; writes timing.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    wpr::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = wpr::load_config(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (eps_opt->count() > 0) cfg.epsilon = epsilon;
    if (fig2_points > 0) cfg.fig2_points = fig2_points;
    cfg.validate();

    if (single->parsed())
      return cmd_single(cfg, alg_name, ps_dbm, pd_dbm, trial);
    if (sweep->parsed()) return cmd_sweep(cfg, out_dir, threads);
    if (fig2->parsed()) return cmd_fig2(cfg, out_dir);
    if (timing->parsed()) return cmd_timing(cfg, out_dir);
    return kExitUsage;
  } catch (const wpr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const wpr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const wpr::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
