#pragma once

#include "wpr/solver.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace wpr {

/// Which inner fixed-split solver the outer algorithms call.
enum class InnerRoute { closed_form, sdr };

struct SolveDiagnostics {
  int iterations = 0;         ///< BCD iterations (best restart) / grid points
  int restarts = 0;
  int grid_points = 0;
  int failed_grid_points = 0; ///< inner solves skipped after solver failure
  double min_half_step_delta = 0.0;  ///< most negative rejected-proposal change
  /// Smallest accepted iterate-to-iterate objective change across all
  /// restarts; >= 0 certifies the ascent never regressed. 0 when the
  /// algorithm has no iterate sequence.
  double min_iterate_delta = 0.0;
  std::string route;
  double wall_time_s = 0.0;
};

struct SolveResult {
  PsRatio rho_star{1.0};
  Beamformer f_star;
  double objective = 1.0;      ///< f1*f2 at the optimum (unclamped)
  double secrecy_rate = 0.0;   ///< 0.5 * max(0, log2(objective))
  double relay_power_mw = 0.0;
  SolveDiagnostics diagnostics;
};

/// Analytic derivative of the joint objective in rho at fixed f, with the
/// pieces of the product rule exposed. Requires equal noise variances and
/// an interior split 0 < rho < 1; throws std::invalid_argument otherwise.
struct DerivativeParts {
  double df = 0.0;   ///< d(f1*f2)/d rho
  double df1 = 0.0;
  double df2 = 0.0;
  double dt = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double t = 0.0;
  double m = 0.0;
  double n = 0.0;
};
DerivativeParts objective_drho(PsRatio rho, const VectorXcd& f,
                               const SystemParams& p, const ChannelSet& ch);

/// Smallest power split at which a fixed beamformer's transmit power fits
/// inside the harvested budget. 0 for f = 0; can exceed 1 when no split
/// can power f.
double feasible_rho_min(const VectorXcd& f, const SystemParams& p,
                        const ChannelSet& ch);

/// Best power split for a fixed beamformer: scan the analytic derivative
/// over the feasible interval, bisect its sign changes, and take the best
/// stationary point or endpoint. Requires equal noise variances.
PsRatio rho_subproblem(const VectorXcd& f, const SystemParams& p,
                       const ChannelSet& ch);

/// Grid the power split at resolution epsilon and solve the inner problem
/// exactly at each point; globally optimal up to the grid resolution.
/// epsilon must lie in [1e-6, 0.1].
SolveResult goa(const SystemParams& p, const ChannelSet& ch, double epsilon,
                InnerRoute route = InnerRoute::closed_form,
                double sdp_tol = 1e-9);

struct LoaConfig {
  double epsilon = 1e-2;  ///< relative objective-change stopping threshold
  int j_restarts = 5;
  int max_iters = 200;
  std::uint64_t seed = 1;
  InnerRoute route = InnerRoute::closed_form;
  double sdp_tol = 1e-9;
  /// Optional (rho, f) starting point used by the first restart.
  std::optional<std::pair<double, VectorXcd>> initial_point;
};

/// Block-coordinate ascent alternating the power-split update and the
/// exact inner beamformer update, with random restarts. Monotone
/// nondecreasing in the objective by construction. Requires equal noise
/// variances (the split update uses the analytic derivative).
SolveResult loa(const SystemParams& p, const ChannelSet& ch,
                const LoaConfig& cfg);

struct TracePoint {
  double rho = 0.0;
  double r_sr = 0.0;          ///< clamped secrecy rate at rho
  double dr_sr_drho = 0.0;    ///< clamped derivative of the secrecy rate
};

struct SingleAntennaResult {
  SolveResult result;
  std::vector<TracePoint> trace;  ///< empty unless trace_points > 0
  TracePoint optimum;             ///< rate and derivative at rho_star
};

/// Single-relay-antenna specialization: the beamformer reduces to the
/// scalar gain that spends exactly the harvested power, leaving a
/// one-dimensional search over the split. Optionally tabulates
/// (rho, rate, derivative) on a uniform grid for plotting.
SingleAntennaResult single_antenna_optimize(const SystemParams& p,
                                            const ChannelSet& ch,
                                            int trace_points = 0);

}  // namespace wpr
