#include "wpr/solver.hpp"

#include <algorithm>
#include <cmath>

namespace wpr {

namespace {

constexpr double kXiMin = 1e-12;

double re_trace(const MatrixXcd& a, const MatrixXcd& z) {
  return (a * z).trace().real();
}

/// Real symmetric embedding of a Hermitian matrix:
///   H = X + iY  ->  [[X, -Y], [Y, X]], which satisfies
///   tr(embed(A) embed(Z)) = 2 tr(A Z) for Hermitian A, Z.
MatrixXd embed_hermitian(const MatrixXcd& h) {
  const int n = static_cast<int>(h.rows());
  MatrixXd e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.real();
  e.bottomRightCorner(n, n) = h.real();
  e.topRightCorner(n, n) = -h.imag();
  e.bottomLeftCorner(n, n) = h.imag();
  return e;
}

/// Recover a Hermitian matrix from a real symmetric iterate, averaging
/// over the embedding's rotation symmetry so the result is exactly
/// Hermitian and inherits positive semidefiniteness.
MatrixXcd unembed_hermitian(const MatrixXd& e) {
  const int n = static_cast<int>(e.rows()) / 2;
  const MatrixXd x =
      0.5 * (e.topLeftCorner(n, n) + e.bottomRightCorner(n, n));
  const MatrixXd y =
      0.5 * (e.bottomLeftCorner(n, n) - e.topRightCorner(n, n));
  MatrixXcd h = 0.5 * (x + x.transpose()).cast<cplx>();
  h += cplx(0.0, 0.5) * (y - y.transpose()).cast<cplx>();
  return h;
}

/// Clip negative eigenvalues of a Hermitian matrix to zero.
MatrixXcd psd_clip(const MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

void phase_normalize(VectorXcd& f, const VectorXcd& b) {
  const cplx ip = b.dot(f);
  if (std::abs(ip) > 0.0) f *= std::polar(1.0, -std::arg(ip));
}

double achieved_ratio(const InnerProblem& prob, const VectorXcd& f) {
  const double num = herm_quad(prob.lifted.B, f);
  const double den =
      herm_quad(prob.lifted.C, f) + herm_quad(prob.lifted.E, f) + prob.sigma2;
  return num / den;
}

InnerSolution degenerate_solution(const InnerProblem& prob,
                                  const char* route) {
  InnerSolution sol;
  sol.f = VectorXcd::Zero(prob.lifted.T.rows());
  sol.ratio = 0.0;
  sol.degenerate = true;
  sol.route = route;
  return sol;
}

}  // namespace

InnerProblem make_inner_problem(PsRatio rho, const SystemParams& p,
                                const ChannelSet& ch) {
  return make_inner_problem(rho, p, ch, harvested_power(rho, p, ch));
}

InnerProblem make_inner_problem(PsRatio rho, const SystemParams& p,
                                const ChannelSet& ch, double budget_mw) {
  InnerProblem prob;
  prob.lifted = lifted_matrices(rho, p, ch);
  prob.p_eh = budget_mw;
  prob.sigma2 = p.sigma_d2;
  prob.rho_bar = rho.bar();
  return prob;
}

InnerSolution solve_inner_closed(const InnerProblem& prob) {
  const VectorXcd& b = prob.lifted.b_vec;
  // A full split (rho = 1) leaves no signal to forward: every feasible f
  // scores zero, so return the zero one rather than an arbitrary
  // budget-tight point.
  if (prob.p_eh <= 0.0 || prob.rho_bar <= 0.0 || b.norm() == 0.0)
    return degenerate_solution(prob, "closed");

  // With the budget tight, the denominator becomes f^H D f for
  // D = C + E + (sigma2/p_eh) T, and the optimum is the generalized
  // Rayleigh maximizer f ~ D^-1 b, rescaled back onto the budget.
  MatrixXcd d = prob.lifted.C + prob.lifted.E +
                (prob.sigma2 / prob.p_eh) * prob.lifted.T;
  VectorXcd f = d.llt().solve(b);
  const double power_raw = herm_quad(prob.lifted.T, f);
  if (!(power_raw > 0.0)) return degenerate_solution(prob, "closed");
  f *= std::sqrt(prob.p_eh / power_raw);
  phase_normalize(f, b);

  InnerSolution sol;
  sol.f = std::move(f);
  sol.ratio = achieved_ratio(prob, sol.f);
  sol.route = "closed";
  return sol;
}

SdpProblem assemble_cc_sdp(const InnerProblem& prob) {
  SdpProblem s;
  s.b_mat = prob.lifted.B;
  s.ce_mat = prob.lifted.C + prob.lifted.E;
  s.t_mat = prob.lifted.T;
  s.sigma2 = prob.sigma2;
  s.p_eh = prob.p_eh;
  s.dim = static_cast<int>(prob.lifted.B.rows());
  return s;
}

SdpSolution solve_sdp(const SdpProblem& prob, double tol) {
  const int n = prob.dim;
  const int nn = 2 * n;   // real embedding size
  const int big = nn + 2; // plus the scale entry and the slack entry

  // Real block layout: [embed(Z) | xi - xi_min | slack]. The factor 1/2 on
  // embedded data keeps complex traces equal to real inner products.
  MatrixXd c_real = MatrixXd::Zero(big, big);
  c_real.topLeftCorner(nn, nn) = 0.5 * embed_hermitian(prob.b_mat);

  MatrixXd a1 = MatrixXd::Zero(big, big);
  a1.topLeftCorner(nn, nn) = 0.5 * embed_hermitian(prob.ce_mat);
  a1(nn, nn) = prob.sigma2;

  MatrixXd a2 = MatrixXd::Zero(big, big);
  a2.topLeftCorner(nn, nn) = 0.5 * embed_hermitian(prob.t_mat);
  a2(nn, nn) = -prob.p_eh;
  a2(nn + 1, nn + 1) = 1.0;

  const double s1 = std::max(1.0, a1.norm());
  const double s2 = std::max(1.0, a2.norm());
  const double sc = std::max(1.0, c_real.norm());

  sdp::Problem engine_prob;
  engine_prob.c_mat = c_real / sc;
  engine_prob.a_mats = {a1 / s1, a2 / s2};
  engine_prob.b = Eigen::Vector2d((1.0 - prob.sigma2 * kXiMin) / s1,
                                  prob.p_eh * kXiMin / s2);

  sdp::Options opts;
  opts.tol = tol;
  const sdp::Result r = sdp::solve(engine_prob, opts);

  SdpSolution sol;
  sol.status = r.status;
  sol.iterations = r.iterations;
  sol.rel_gap = r.rel_gap;
  sol.rel_primal_infeas = r.rel_primal_infeas;
  sol.rel_dual_infeas = r.rel_dual_infeas;

  // Repair the iterate so the returned pair satisfies the constraints to
  // absolute accuracy: project to Hermitian PSD, clamp the scale, pull the
  // power inequality back into its halfspace, then renormalize the
  // equality (a joint positive rescale, which preserves the inequality).
  MatrixXcd z = psd_clip(unembed_hermitian(r.x.topLeftCorner(nn, nn)));
  double xi = std::max(r.x(nn, nn) + kXiMin, kXiMin);
  if (prob.p_eh > 0.0) {
    const double tz = re_trace(prob.t_mat, z);
    if (tz > xi * prob.p_eh) z *= xi * prob.p_eh / tz;
  } else {
    z.setZero();
  }
  const double norm = re_trace(prob.ce_mat, z) + xi * prob.sigma2;
  z /= norm;
  xi /= norm;
  xi = std::max(xi, kXiMin);

  sol.z = std::move(z);
  sol.xi = xi;
  sol.x = sol.z / xi;
  sol.objective = re_trace(prob.b_mat, sol.z);
  return sol;
}

std::vector<VectorXcd> rank_one_decompose(const MatrixXcd& x,
                                          const MatrixXcd& a1,
                                          const MatrixXcd& a2) {
  const MatrixXcd xh = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(xh);
  const double trace = std::max(es.eigenvalues().sum(), 0.0);
  const double cutoff = 1e-9 * trace;
  if (!(trace > 0.0))
    throw std::invalid_argument("rank_one_decompose: matrix is not PSD");

  std::vector<VectorXcd> active;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > cutoff)
      active.push_back(std::sqrt(ev) * es.eigenvectors().col(i));
  }
  if (active.empty())
    throw std::invalid_argument("rank_one_decompose: matrix is numerically zero");
  const int r = static_cast<int>(active.size());

  auto quad = [](const MatrixXcd& a, const VectorXcd& v) {
    return std::real(cplx(v.dot(a * v)));
  };

  // Targets come from the kept eigen-pieces, not from x: that way the
  // residuals sum to zero exactly and opposite-sign extremes always exist
  // while any residual is nonzero (truncated eigenvalues would otherwise
  // bias every residual to one side).
  double t1 = 0.0, t2 = 0.0;
  for (const auto& v : active) {
    t1 += quad(a1, v);
    t2 += quad(a2, v);
  }
  t1 /= r;
  t2 /= r;
  const double scale1 = std::max(1.0, std::abs(t1) * r);
  const double scale2 = std::max(1.0, std::abs(t2) * r);

  // Sweep 1: planar rotations driving every v^H a1 v to the common mean.
  // Each rotation zeroes the residual of one vector exactly; the partner
  // absorbs the pair's residual sum, so at most r-1 rotations are needed.
  std::vector<VectorXcd> fixed;
  int guard = 0;
  while (active.size() > 1 && guard++ < 4 * r) {
    int imax = 0, imin = 0;
    double rmax = -1e300, rmin = 1e300;
    for (size_t i = 0; i < active.size(); ++i) {
      const double res = quad(a1, active[i]) - t1;
      if (res > rmax) { rmax = res; imax = static_cast<int>(i); }
      if (res < rmin) { rmin = res; imin = static_cast<int>(i); }
    }
    if (std::max(std::abs(rmax), std::abs(rmin)) <= 1e-12 * scale1) break;
    if (!(rmax > 0.0 && rmin < 0.0)) break;  // roundoff floor reached
    const VectorXcd pi = active[imax];
    const VectorXcd pj = active[imin];
    const cplx c = cplx(pi.dot(a1 * pj));
    const double phi = (std::abs(c) > 0.0) ? -std::arg(c) : 0.0;
    const double disc =
        std::sqrt(std::max(std::abs(c) * std::abs(c) - rmax * rmin, 0.0));
    const double s = -rmax / (std::abs(c) + disc);
    const cplx gamma = std::polar(s, phi);
    const double den = std::sqrt(1.0 + s * s);
    fixed.push_back((pi + gamma * pj) / den);
    VectorXcd v = (-std::conj(gamma) * pi + pj) / den;
    if (imax > imin) std::swap(imax, imin);
    active.erase(active.begin() + imin);
    active.erase(active.begin() + imax);
    active.push_back(std::move(v));
  }
  for (auto& v : active) fixed.push_back(std::move(v));

  // Sweep 2: equalize v^H a2 v with rotations whose phase is chosen so
  // every v^H a1 v is left unchanged (the a1 cross term is rotated onto
  // the imaginary axis).
  std::vector<VectorXcd> done;
  active = std::move(fixed);
  guard = 0;
  while (active.size() > 1 && guard++ < 4 * r) {
    int imax = 0, imin = 0;
    double rmax = -1e300, rmin = 1e300;
    for (size_t i = 0; i < active.size(); ++i) {
      const double res = quad(a2, active[i]) - t2;
      if (res > rmax) { rmax = res; imax = static_cast<int>(i); }
      if (res < rmin) { rmin = res; imin = static_cast<int>(i); }
    }
    if (std::max(std::abs(rmax), std::abs(rmin)) <= 1e-12 * scale2) break;
    if (!(rmax > 0.0 && rmin < 0.0)) break;  // roundoff floor reached
    const VectorXcd pi = active[imax];
    const VectorXcd pj = active[imin];
    const cplx c1 = cplx(pi.dot(a1 * pj));
    const cplx c2 = cplx(pi.dot(a2 * pj));
    const double psi = (std::abs(c1) > 1e-14 * scale1)
                           ? 0.5 * M_PI - std::arg(c1)
                           : (std::abs(c2) > 0.0 ? -std::arg(c2) : 0.0);
    const double beta = std::real(std::polar(1.0, psi) * c2);
    const double disc = std::sqrt(std::max(beta * beta - rmax * rmin, 0.0));
    const double q = -(beta + (beta >= 0.0 ? disc : -disc));
    double s;
    if (q == 0.0) {
      s = 0.0;
    } else {
      const double root1 = q / rmin;  // rmin is the s^2 coefficient
      const double root2 = rmax / q;
      s = (std::abs(root1) <= std::abs(root2)) ? root1 : root2;
    }
    const cplx gamma = std::polar(s, psi);
    const double den = std::sqrt(1.0 + s * s);
    done.push_back((pi + gamma * pj) / den);
    VectorXcd v = (-std::conj(gamma) * pi + pj) / den;
    if (imax > imin) std::swap(imax, imin);
    active.erase(active.begin() + imin);
    active.erase(active.begin() + imax);
    active.push_back(std::move(v));
  }
  for (auto& v : active) done.push_back(std::move(v));
  return done;
}

InnerSolution solve_inner_sdr(const InnerProblem& prob, double tol) {
  const VectorXcd& b = prob.lifted.b_vec;
  if (prob.p_eh <= 0.0 || prob.rho_bar <= 0.0 || b.norm() == 0.0)
    return degenerate_solution(prob, "sdr");

  const SdpProblem sdp_prob = assemble_cc_sdp(prob);
  const SdpSolution sol = solve_sdp(sdp_prob, tol);
  const double accept_tol = std::max(100.0 * tol, 1e-7);
  const bool acceptable =
      sol.status == sdp::Status::optimal ||
      (sol.rel_gap <= accept_tol && sol.rel_primal_infeas <= accept_tol &&
       sol.rel_dual_infeas <= accept_tol);
  if (!acceptable)
    throw SolverError(std::string("solve_inner_sdr: interior-point solve ") +
                      sdp::to_string(sol.status) +
                      " (gap=" + std::to_string(sol.rel_gap) + ")");

  // Recover a rank-one solution from the relaxation optimum X = Z / xi.
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sol.x);
  const double trace = std::max(es.eigenvalues().sum(), 0.0);
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-9 * trace) ++rank;
  rank = std::max(rank, 1);

  InnerSolution out;
  out.route = "sdr";
  out.sdp_iterations = sol.iterations;
  out.recovered_rank = rank;

  if (rank == 1) {
    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);
    out.f = std::sqrt(std::max(es.eigenvalues()(top), 0.0)) *
            es.eigenvectors().col(top);
  } else {
    // Equal-share split preserves both constraint traces, so sqrt(r)
    // times the best piece is feasible and attains the relaxation value.
    const auto pieces =
        rank_one_decompose(sol.x, sdp_prob.ce_mat, sdp_prob.t_mat);
    double best = -1.0;
    VectorXcd best_y;
    for (const auto& y : pieces) {
      const double val = std::real(cplx(y.dot(sdp_prob.b_mat * y)));
      if (val > best) { best = val; best_y = y; }
    }
    if (best_y.size() == 0) {
      Eigen::Index top;
      es.eigenvalues().maxCoeff(&top);
      out.f = std::sqrt(std::max(es.eigenvalues()(top), 0.0)) *
              es.eigenvectors().col(top);
    } else {
      out.f = std::sqrt(static_cast<double>(pieces.size())) * best_y;
    }
  }
  phase_normalize(out.f, b);
  out.ratio = achieved_ratio(prob, out.f);
  return out;
}

}  // namespace wpr
