#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace wpr::sdp {

/// Standard-form semidefinite program over one dense real symmetric block:
///   maximize   <c_mat, X>
///   subject to <a_mats[k], X> = b[k]  for all k,   X >= 0 (PSD).
/// Inequalities are expected to be rewritten with slack entries on the
/// diagonal of X before reaching this engine.
struct Problem {
  Eigen::MatrixXd c_mat;
  std::vector<Eigen::MatrixXd> a_mats;
  Eigen::VectorXd b;
};

enum class Status {
  optimal,         ///< all scaled residuals at or below tolerance
  max_iterations,  ///< ran out of iterations; best iterate returned
  numerical_failure  ///< factorization broke down; best iterate returned
};

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::max_iterations: return "max_iterations";
    default: return "numerical_failure";
  }
}

struct Result {
  Eigen::MatrixXd x;           ///< primal matrix iterate
  Eigen::VectorXd y;           ///< dual multipliers
  Eigen::MatrixXd dual_slack;  ///< S = sum_k y_k A_k - C at optimum
  Status status = Status::numerical_failure;
  int iterations = 0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_primal_infeas = 0.0;
  double rel_dual_infeas = 0.0;
  double rel_gap = 0.0;
};

struct Options {
  double tol = 1e-9;        ///< on scaled primal/dual infeasibility and gap
  int max_iterations = 100;
  double step_fraction = 0.98;  ///< fraction of the distance to the boundary
};

/// Infeasible-start primal-dual interior-point solve (predictor-corrector
/// path following with the X*S direction). Problem data should be roughly
/// unit-normalized by the caller for the default tolerance to be
/// meaningful.
Result solve(const Problem& problem, const Options& options = {});

}  // namespace wpr::sdp
