#pragma once

#include "wpr/model.hpp"
#include "wpr/sdp.hpp"

#include <optional>
#include <vector>

namespace wpr {

/// Inner fixed-split problem: maximize the destination SINR ratio
///   p(f) = f^H B f / (f^H (C+E) f + sigma2)
/// over f subject to the harvested-power budget f^H T f <= p_eh.
struct InnerProblem {
  LiftedMatrices lifted;
  double p_eh = 0.0;    ///< relay transmit power budget (mW)
  double sigma2 = 0.0;  ///< destination noise variance (mW)
  double rho_bar = 0.0; ///< 1 - rho at which the lifted data was built
};

/// Build the inner problem at a power split, with the budget set to the
/// power harvested at that split.
InnerProblem make_inner_problem(PsRatio rho, const SystemParams& p,
                                const ChannelSet& ch);

/// Same, but with an explicit transmit-power budget (fixed-power baseline).
InnerProblem make_inner_problem(PsRatio rho, const SystemParams& p,
                                const ChannelSet& ch, double budget_mw);

struct InnerSolution {
  VectorXcd f;          ///< optimal stacked beamformer (phase-normalized)
  double ratio = 0.0;   ///< optimal SINR ratio p(f)
  bool degenerate = false;  ///< true when the optimum is f = 0
  std::string route;    ///< "closed" or "sdr"
  int sdp_iterations = 0;
  int recovered_rank = 0;
};

/// Closed-form inner optimum: the budget constraint is tight at any
/// optimum (scaling any feasible f up increases the ratio), reducing the
/// problem to a generalized Rayleigh quotient with solution
/// f* proportional to (C + E + (sigma2/p_eh) T)^-1 b.
InnerSolution solve_inner_closed(const InnerProblem& prob);

/// Charnes-Cooper transformed data for the semidefinite relaxation:
///   maximize  tr(b_mat Z)
///   s.t.      tr(ce_mat Z) + xi * sigma2 = 1,
///             tr(t_mat Z) <= xi * p_eh,   Z >= 0,  xi >= xi_min.
struct SdpProblem {
  MatrixXcd b_mat;
  MatrixXcd ce_mat;
  MatrixXcd t_mat;
  double sigma2 = 0.0;
  double p_eh = 0.0;
  int dim = 0;
};

SdpProblem assemble_cc_sdp(const InnerProblem& prob);

struct SdpSolution {
  MatrixXcd z;        ///< PSD solution of the transformed problem
  double xi = 0.0;    ///< scale variable
  MatrixXcd x;        ///< recovered relaxation solution z / xi
  double objective = 0.0;  ///< tr(b_mat z), the optimal ratio value
  sdp::Status status = sdp::Status::numerical_failure;
  int iterations = 0;
  double rel_gap = 0.0;
  double rel_primal_infeas = 0.0;
  double rel_dual_infeas = 0.0;
};

/// Solve the transformed problem with the real-embedding interior-point
/// engine, then repair the iterate so the returned (z, xi) satisfy the
/// constraints to tight absolute accuracy.
SdpSolution solve_sdp(const SdpProblem& prob, double tol = 1e-9);

/// Split a PSD matrix X of rank r into r vectors y_i with
///   y_i^H A1 y_i = tr(A1 X)/r  and  y_i^H A2 y_i = tr(A2 X)/r
/// for Hermitian A1, A2, while sum_i y_i y_i^H = X. Two sweeps of planar
/// rotations: the first equalizes the A1 forms, the second equalizes the
/// A2 forms using rotations chosen to leave every A1 form unchanged.
std::vector<VectorXcd> rank_one_decompose(const MatrixXcd& x,
                                          const MatrixXcd& a1,
                                          const MatrixXcd& a2);

/// Inner solve via semidefinite relaxation plus rank-one recovery. Throws
/// SolverError if the interior-point engine fails to converge.
InnerSolution solve_inner_sdr(const InnerProblem& prob, double tol = 1e-9);

}  // namespace wpr
