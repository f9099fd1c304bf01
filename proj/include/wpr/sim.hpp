#pragma once

#include "wpr/algorithms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wpr {

/// Thrown when a scenario configuration is malformed or out of range.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { goa, loa, epr };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Full description of a reproducible experiment: scenario geometry,
/// power grids, algorithm roster and solver knobs.
struct ScenarioConfig {
  double noise_dbm = 0.0;  ///< common noise floor for all three variances
  int n_r = 2;
  double eta = 1.0;
  double d_sr = 1.0, d_dr = 1.0, d_rd = 1.0;  ///< link distances
  std::vector<double> p_s_grid_dbm = {10, 20, 30, 40, 50};
  std::vector<double> p_d_grid_dbm = {40, 50};
  int n_trials = 100;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms = {Algorithm::goa, Algorithm::loa,
                                       Algorithm::epr};
  double epsilon = 1e-2;     ///< grid step for goa / stop threshold for loa
  int loa_restarts = 5;
  int loa_max_iters = 200;
  double epr_p_r_dbm = 43.0; ///< fixed relay power of the non-harvesting baseline
  std::vector<double> timing_eps_grid = {1e-2, 1e-3, 1e-4};
  int timing_trials = 5;
  int fig2_points = 1000;
  double fig2_p_s_dbm = 40.0;
  double fig2_p_d_dbm = 40.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Scenario knobs resolved into solver parameters for one grid cell.
SystemParams make_system_params(const ScenarioConfig& cfg, double p_s_dbm,
                                double p_d_dbm);

/// Draw one fading realization. Entries are i.i.d. circularly-symmetric
/// complex normal with variance d^-2 per link (unit-distance Rayleigh
/// with inverse-square path loss). The stream depends only on
/// (seed, trial), so every algorithm and power cell sees the same
/// channels: paired comparisons use common random numbers.
ChannelSet gen_channels(std::uint64_t seed, int trial, const ScenarioConfig& cfg);

/// Non-harvesting baseline: no power splitting (rho = 0), beamformer
/// optimized under a fixed relay power budget.
SolveResult epr_baseline(const SystemParams& p, const ChannelSet& ch,
                         double p_r_fixed_mw);

struct SweepRecord {
  double p_s_dbm = 0.0;
  double p_d_dbm = 0.0;
  Algorithm algorithm = Algorithm::goa;
  int trial = 0;
  double secrecy_rate_bps_hz = 0.0;
  double relay_power_mw = 0.0;
  double rho_star = 0.0;
  double wall_time_s = 0.0;
  std::string status = "ok";
};

/// Run every (p_s, p_d, algorithm, trial) combination. Records are
/// ordered by the nested loop order regardless of thread count, and all
/// numeric fields except wall_time_s are bit-identical across reruns with
/// the same config.
std::vector<SweepRecord> run_sweep(const ScenarioConfig& cfg, int threads = 1);

struct TimingRow {
  Algorithm algorithm = Algorithm::goa;
  double epsilon = 0.0;
  int n_trials = 0;
  double mean_wall_s = 0.0;
  double mean_secrecy = 0.0;
};

/// Wall-clock comparison of the two joint algorithms across solver
/// accuracies, both driven through the semidefinite-relaxation inner
/// route (the configuration whose cost the accuracy knob actually
/// scales). Single-threaded by construction.
std::vector<TimingRow> timing_experiment(const ScenarioConfig& cfg);

struct Fig2Trace {
  std::vector<TracePoint> points;  ///< uniform split grid over [0, 1]
  TracePoint optimum;
  SolveResult result;
};

/// Single-antenna rate/derivative profile over the power split for one
/// channel draw, plus the located optimum. Requires cfg.n_r == 1.
Fig2Trace fig2_trace(const ScenarioConfig& cfg);

}  // namespace wpr
