#include "wpr/sdp.hpp"

#include <algorithm>
#include <cmath>

namespace wpr::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inner(const MatrixXd& a, const MatrixXd& b) {
  return a.cwiseProduct(b).sum();
}

/// Largest alpha in (0, 1] with P + alpha * D staying positive definite,
/// computed from the minimum eigenvalue of L^-1 D L^-T where P = L L^T.
/// Returns -1 if P itself is not positive definite.
double max_step(const MatrixXd& p, const MatrixXd& d) {
  Eigen::LLT<MatrixXd> llt(p);
  if (llt.info() != Eigen::Success) return -1.0;
  const MatrixXd l_inv_d = llt.matrixL().solve(d);
  const MatrixXd w = llt.matrixL().solve(l_inv_d.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (w + w.transpose()),
                                             Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1.0;
  return std::min(1.0, -1.0 / lmin);
}

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  const int n = static_cast<int>(problem.c_mat.rows());
  const int m = static_cast<int>(problem.a_mats.size());
  const MatrixXd& c = problem.c_mat;
  const VectorXd& b = problem.b;

  const double b_scale = 1.0 + b.norm();
  const double c_scale = 1.0 + c.norm();

  // Infeasible start on the central ray, scaled to the data magnitude.
  double beta_p = std::max(10.0, std::sqrt(static_cast<double>(n)));
  if (m > 0)
    beta_p = std::max(beta_p, static_cast<double>(n) * b.cwiseAbs().maxCoeff());
  const double beta_d =
      std::max({10.0, std::sqrt(static_cast<double>(n)), c.norm()});

  MatrixXd x = beta_p * MatrixXd::Identity(n, n);
  MatrixXd s = beta_d * MatrixXd::Identity(n, n);
  VectorXd y = VectorXd::Zero(m);

  Result res;
  res.x = x;
  res.y = y;
  res.dual_slack = s;
  res.status = Status::max_iterations;

  MatrixXd m_mat(m, m);
  VectorXd rhs(m), dy(m), dy_aff(m);
  VectorXd rp(m);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::LLT<MatrixXd> llt_s(s);
    if (llt_s.info() != Eigen::Success) {
      res.status = Status::numerical_failure;
      break;
    }
    const MatrixXd s_inv = llt_s.solve(MatrixXd::Identity(n, n));

    for (int k = 0; k < m; ++k) rp(k) = b(k) - inner(problem.a_mats[k], x);
    MatrixXd r_dual = c + s;  // dual residual C + S - sum y_k A_k
    for (int k = 0; k < m; ++k) r_dual -= y(k) * problem.a_mats[k];

    const double pobj = inner(c, x);
    const double dobj = b.dot(y);
    res.x = x;
    res.y = y;
    res.dual_slack = s;
    res.iterations = iter;
    res.primal_obj = pobj;
    res.dual_obj = dobj;
    res.rel_primal_infeas = rp.norm() / b_scale;
    res.rel_dual_infeas = r_dual.norm() / c_scale;
    res.rel_gap =
        std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (res.rel_primal_infeas <= options.tol &&
        res.rel_dual_infeas <= options.tol && res.rel_gap <= options.tol) {
      res.status = Status::optimal;
      return res;
    }

    const double mu = inner(x, s) / n;

    // Schur complement M_kj = tr(A_k X A_j S^-1); shared by both stages.
    std::vector<MatrixXd> xa_sinv(m);
    for (int j = 0; j < m; ++j)
      xa_sinv[j] = x * problem.a_mats[j] * s_inv;
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        m_mat(k, j) = inner(problem.a_mats[k], xa_sinv[j]);
    Eigen::PartialPivLU<MatrixXd> lu(m_mat);

    // The Newton system for complementarity residual Rc:
    //   dS = sum dy_k A_k - Rdual,  dX = (Rc - X dS) S^-1 (symmetrized),
    //   <A_k, dX> = rp_k.
    const MatrixXd x_rdual_sinv = x * (r_dual * s_inv);
    auto solve_direction = [&](const MatrixXd& rc, VectorXd& dy_out,
                               MatrixXd& dx_out, MatrixXd& ds_out) {
      const MatrixXd rc_sinv = rc * s_inv;
      for (int k = 0; k < m; ++k)
        rhs(k) =
            inner(problem.a_mats[k], rc_sinv + x_rdual_sinv) - rp(k);
      dy_out = lu.solve(rhs);
      ds_out = -r_dual;
      for (int k = 0; k < m; ++k) ds_out += dy_out(k) * problem.a_mats[k];
      dx_out = (rc - x * ds_out) * s_inv;
      dx_out = 0.5 * (dx_out + dx_out.transpose()).eval();
    };

    // Predictor: aim at full complementarity reduction.
    MatrixXd dx_aff(n, n), ds_aff(n, n);
    solve_direction(-(x * s), dy_aff, dx_aff, ds_aff);
    const double ap_aff = max_step(x, dx_aff);
    const double ad_aff = max_step(s, ds_aff);
    if (ap_aff < 0.0 || ad_aff < 0.0) {
      res.status = Status::numerical_failure;
      break;
    }
    const double mu_aff =
        inner(x + ap_aff * dx_aff, s + ad_aff * ds_aff) / n;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3);
    sigma = std::min(1.0, sigma);

    // Corrector: recenter and compensate the second-order term.
    MatrixXd dx(n, n), ds(n, n);
    const MatrixXd rc = sigma * mu * MatrixXd::Identity(n, n) - x * s -
                        dx_aff * ds_aff;
    solve_direction(rc, dy, dx, ds);

    double ap = max_step(x, dx);
    double ad = max_step(s, ds);
    if (ap < 0.0 || ad < 0.0) {
      res.status = Status::numerical_failure;
      break;
    }
    ap = std::min(1.0, options.step_fraction * ap);
    ad = std::min(1.0, options.step_fraction * ad);

    x += ap * dx;
    s += ad * ds;
    y += ad * dy;
    x = 0.5 * (x + x.transpose()).eval();
    s = 0.5 * (s + s.transpose()).eval();
    res.iterations = iter + 1;
  }
  return res;
}

}  // namespace wpr::sdp
