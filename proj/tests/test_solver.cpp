#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "test_util.hpp"

#include "wpr/solver.hpp"

using namespace wpr;
using test::random_f;
using test::random_instance;
using test::rel_err;

namespace {

MatrixXcd random_hermitian(Rng& rng, int n, bool psd = false) {
  MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal(1.0);
  if (psd) return a * a.adjoint();
  return 0.5 * (a + a.adjoint());
}

double quad(const MatrixXcd& a, const VectorXcd& v) {
  return std::real(cplx(v.dot(a * v)));
}

}  // namespace

TEST_CASE("interior-point engine recovers the maximum eigenvalue") {
  Rng rng(11);
  for (int it = 0; it < 20; ++it) {
    const int n = 2 + (it % 5);
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = rng.normal();
    c = Eigen::MatrixXd(0.5 * (c + c.transpose()));

    sdp::Problem prob;
    prob.c_mat = c;
    prob.a_mats = {Eigen::MatrixXd::Identity(n, n)};
    prob.b = Eigen::VectorXd::Ones(1);
    const sdp::Result r = sdp::solve(prob);

    REQUIRE(r.status == sdp::Status::optimal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c,
                                                      Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    CHECK(std::abs(r.primal_obj - lmax) < 1e-7 * (1.0 + std::abs(lmax)));
    CHECK(r.rel_primal_infeas < 1e-8);
    CHECK(r.rel_dual_infeas < 1e-8);
  }
}

TEST_CASE("interior-point engine handles multiple constraints") {
  // maximize diag(1,2,3).X with tr X = 1 and X_00 = 1/2: optimum 2.
  sdp::Problem prob;
  prob.c_mat = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(3, 3);
  a2(0, 0) = 1.0;
  prob.a_mats = {Eigen::MatrixXd::Identity(3, 3), a2};
  prob.b = Eigen::Vector2d(1.0, 0.5);
  const sdp::Result r = sdp::solve(prob);
  REQUIRE(r.status == sdp::Status::optimal);
  CHECK(r.primal_obj == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.x(0, 0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.x(2, 2) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("closed-form inner solution spends exactly the budget") {
  Rng rng(22);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + (it % 4);
    const auto inst = random_instance(rng, n);
    const PsRatio rho(rng.uniform(0.02, 0.98));
    const InnerProblem ip = make_inner_problem(rho, inst.params, inst.ch);
    const InnerSolution sol = solve_inner_closed(ip);

    REQUIRE(!sol.degenerate);
    CHECK(rel_err(herm_quad(ip.lifted.T, sol.f), ip.p_eh) < 1e-10);
    // Canonical phase: the coupling inner product is real nonnegative.
    const cplx ipd = ip.lifted.b_vec.dot(sol.f);
    CHECK(std::abs(std::arg(ipd)) < 1e-10);
    // Reported ratio is the achieved ratio.
    const double num = herm_quad(ip.lifted.B, sol.f);
    const double den = herm_quad(ip.lifted.C, sol.f) +
                       herm_quad(ip.lifted.E, sol.f) + ip.sigma2;
    CHECK(rel_err(sol.ratio, num / den) < 1e-12);
  }
}

TEST_CASE("closed-form inner solution dominates random feasible points") {
  Rng rng(33);
  for (int it = 0; it < 20; ++it) {
    const int n = 1 + (it % 3);
    const auto inst = random_instance(rng, n);
    const PsRatio rho(rng.uniform(0.05, 0.95));
    const InnerProblem ip = make_inner_problem(rho, inst.params, inst.ch);
    const InnerSolution sol = solve_inner_closed(ip);

    for (int s = 0; s < 500; ++s) {
      VectorXcd f = random_f(rng, n);
      // Scale onto the power boundary (where any maximizer must sit).
      f *= std::sqrt(ip.p_eh / herm_quad(ip.lifted.T, f));
      const double num = herm_quad(ip.lifted.B, f);
      const double den = herm_quad(ip.lifted.C, f) +
                         herm_quad(ip.lifted.E, f) + ip.sigma2;
      CHECK(num / den <= sol.ratio * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("inner solve handles degenerate problems") {
  Rng rng(44);
  auto inst = random_instance(rng, 2);

  // Zero budget: splitting nothing to harvesting means no transmit power.
  InnerProblem ip = make_inner_problem(PsRatio(0.0), inst.params, inst.ch);
  CHECK(ip.p_eh == 0.0);
  const InnerSolution s0 = solve_inner_closed(ip);
  CHECK(s0.degenerate);
  CHECK(s0.f.norm() == 0.0);
  CHECK(s0.ratio == 0.0);
  const InnerSolution s0r = solve_inner_sdr(ip);
  CHECK(s0r.degenerate);

  // Zero coupling: a dead relay->destination link kills the numerator.
  inst.ch.h_rd.setZero();
  const InnerProblem ip2 =
      make_inner_problem(PsRatio(0.5), inst.params, inst.ch);
  const InnerSolution s2 = solve_inner_closed(ip2);
  CHECK(s2.degenerate);
  CHECK(s2.ratio == 0.0);
}

TEST_CASE("transformed SDP solution satisfies its constraints tightly") {
  Rng rng(55);
  for (int it = 0; it < 25; ++it) {
    const int n = 1 + (it % 3);
    const auto inst = random_instance(rng, n);
    const PsRatio rho(rng.uniform(0.05, 0.95));
    const InnerProblem ip = make_inner_problem(rho, inst.params, inst.ch);
    const SdpProblem sp = assemble_cc_sdp(ip);
    const SdpSolution sol = solve_sdp(sp);

    REQUIRE(sol.status == sdp::Status::optimal);
    // Hermitian PSD.
    CHECK((sol.z - sol.z.adjoint()).norm() < 1e-12 * (1.0 + sol.z.norm()));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sol.z, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * (1.0 + sol.z.norm()));
    // Scale bound and both constraints, absolutely.
    CHECK(sol.xi >= 1e-12);
    const double eq = (sp.ce_mat * sol.z).trace().real() +
                      sol.xi * sp.sigma2;
    CHECK(std::abs(eq - 1.0) < 1e-7);
    const double pw = (sp.t_mat * sol.z).trace().real();
    CHECK(pw <= sol.xi * sp.p_eh + 1e-7);
  }
}

TEST_CASE("rank-one split preserves the matrix and equalizes both forms") {
  Rng rng(66);
  for (int it = 0; it < 60; ++it) {
    const int n = 2 + (it % 4);
    const int r = 1 + (it % n);
    // Random PSD matrix of known rank r.
    MatrixXcd root(n, r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) root(i, j) = rng.cnormal(1.0);
    const MatrixXcd x = root * root.adjoint();
    const MatrixXcd a1 = random_hermitian(rng, n, true);  // PSD, like C+E
    const MatrixXcd a2 = random_hermitian(rng, n, true);  // PSD, like T

    const auto ys = rank_one_decompose(x, a1, a2);
    REQUIRE(static_cast<int>(ys.size()) >= 1);

    MatrixXcd sum = MatrixXcd::Zero(n, n);
    for (const auto& y : ys) sum += y * y.adjoint();
    CHECK((sum - x).norm() < 1e-9 * (1.0 + x.norm()));

    const double t1 = (a1 * x).trace().real() / ys.size();
    const double t2 = (a2 * x).trace().real() / ys.size();
    for (const auto& y : ys) {
      CHECK(std::abs(quad(a1, y) - t1) < 1e-8 * std::max(1.0, std::abs(t1)));
      CHECK(std::abs(quad(a2, y) - t2) < 1e-8 * std::max(1.0, std::abs(t2)));
    }
  }
}

TEST_CASE("rank-one split rejects non-PSD input") {
  MatrixXcd neg = -MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(
      rank_one_decompose(neg, MatrixXcd::Identity(2, 2),
                         MatrixXcd::Identity(2, 2)),
      std::invalid_argument);
}

TEST_CASE("relaxation route agrees with the closed form") {
  Rng rng(77);
  for (int it = 0; it < 30; ++it) {
    const int n = 1 + (it % 3);
    const auto inst = random_instance(rng, n);
    const PsRatio rho(rng.uniform(0.05, 0.95));
    const InnerProblem ip = make_inner_problem(rho, inst.params, inst.ch);

    const InnerSolution closed = solve_inner_closed(ip);
    const InnerSolution sdr = solve_inner_sdr(ip);

    CHECK(rel_err(sdr.ratio, closed.ratio) < 1e-5);
    // Recovered point is feasible.
    CHECK(herm_quad(ip.lifted.T, sdr.f) <= ip.p_eh * (1.0 + 1e-7) + 1e-12);
    // Canonical phase.
    const cplx ipd = ip.lifted.b_vec.dot(sdr.f);
    CHECK(std::abs(std::arg(ipd)) < 1e-8);
  }
}
