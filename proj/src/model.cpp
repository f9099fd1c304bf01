#include "wpr/model.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace wpr {

namespace {

/// Scalar pieces of the equal-noise expansion t = 1 + m * n. Valid only
/// when all noise variances equal sigma2.
struct ScalarT {
  double m;
  double n;
  double t;
};

ScalarT scalar_t_equal_noise(double rho, const SystemParams& p,
                             const ChannelSet& ch) {
  const double rb = 1.0 - rho;
  const double s2 = p.sigma_r2;
  const double nsr = ch.h_sr.squaredNorm();
  const double ndr = ch.h_dr.squaredNorm();
  const double cross = std::norm(cplx(ch.h_dr.dot(ch.h_sr)));
  const double d = (2.0 - rho) * s2 + rb * p.p_d * ndr;
  const double c = rb / ((2.0 - rho) * s2);
  const double m = nsr + c * p.p_d * (ndr * nsr - cross);
  const double n = rb * p.p_s / d;
  return {m, n, 1.0 + m * n};
}

}  // namespace

MatrixXcd matrix_a(PsRatio rho, const SystemParams& p, const ChannelSet& ch) {
  const double rb = rho.bar();
  const int n = static_cast<int>(ch.h_dr.size());
  MatrixXcd a = rb * p.p_d * (ch.h_dr * ch.h_dr.adjoint());
  a += (rb * p.sigma_r2 + p.sigma_c2) * MatrixXcd::Identity(n, n);
  return a;
}

MatrixXcd inverse_a_smw(PsRatio rho, const SystemParams& p,
                        const ChannelSet& ch) {
  if (!p.equal_noise())
    throw std::invalid_argument(
        "inverse_a_smw: requires equal noise variances");
  const double rho_v = rho.value();
  const double rb = rho.bar();
  const double s2 = p.sigma_r2;
  const int n = static_cast<int>(ch.h_dr.size());
  const double ndr = ch.h_dr.squaredNorm();
  const double d = (2.0 - rho_v) * s2 + rb * p.p_d * ndr;
  const double c = rb / ((2.0 - rho_v) * s2);
  MatrixXcd inv = (1.0 + c * p.p_d * ndr) * MatrixXcd::Identity(n, n);
  inv -= c * p.p_d * (ch.h_dr * ch.h_dr.adjoint());
  inv /= d;
  return inv;
}

double relay_capacity_factor(PsRatio rho, const SystemParams& p,
                             const ChannelSet& ch) {
  if (p.equal_noise()) {
    return scalar_t_equal_noise(rho.value(), p, ch).t;
  }
  const MatrixXcd a = matrix_a(rho, p, ch);
  const VectorXcd x = a.llt().solve(ch.h_sr);
  return 1.0 + rho.bar() * p.p_s * std::real(cplx(ch.h_sr.dot(x)));
}

double relay_rate(PsRatio rho, const SystemParams& p, const ChannelSet& ch) {
  return std::log2(relay_capacity_factor(rho, p, ch));
}

double harvested_power(PsRatio rho, const SystemParams& p,
                       const ChannelSet& ch) {
  const double inflow = p.p_s * ch.h_sr.squaredNorm() +
                        p.p_d * ch.h_dr.squaredNorm() +
                        p.sigma_r2 * static_cast<double>(p.n_r);
  return p.eta * rho.value() * inflow;
}

double destination_rate(const Beamformer& f, PsRatio rho,
                        const SystemParams& p, const ChannelSet& ch) {
  const double rb = rho.bar();
  const VectorXcd fh_sr = f.F * ch.h_sr;
  const double sig = rb * p.p_s * std::norm(cplx(ch.h_rd.dot(fh_sr)));
  const double fwd_noise =
      (rb * p.sigma_r2 + p.sigma_c2) * (f.F.adjoint() * ch.h_rd).squaredNorm();
  return std::log2(1.0 + sig / (fwd_noise + p.sigma_d2));
}

double secrecy_rate(const Beamformer& f, PsRatio rho, const SystemParams& p,
                    const ChannelSet& ch) {
  const double diff =
      destination_rate(f, rho, p, ch) - relay_rate(rho, p, ch);
  return 0.5 * std::max(0.0, diff);
}

double relay_power_used(const Beamformer& f, PsRatio rho,
                        const SystemParams& p, const ChannelSet& ch) {
  const double rb = rho.bar();
  const double sig = rb * (p.p_s * (f.F * ch.h_sr).squaredNorm() +
                           p.p_d * (f.F * ch.h_dr).squaredNorm());
  const double noise =
      (rb * p.sigma_r2 + p.sigma_c2) * f.F.squaredNorm();
  return sig + noise;
}

LiftedMatrices lifted_matrices(PsRatio rho, const SystemParams& p,
                               const ChannelSet& ch) {
  const double rb = rho.bar();
  const int n = static_cast<int>(ch.h_sr.size());
  const int n2 = n * n;
  LiftedMatrices l;

  l.b_vec = Eigen::kroneckerProduct(ch.h_sr.conjugate(), ch.h_rd).eval();
  l.B = (rb * p.p_s) * (l.b_vec * l.b_vec.adjoint());

  const MatrixXcd rd_outer = ch.h_rd * ch.h_rd.adjoint();
  const MatrixXcd w =
      Eigen::kroneckerProduct(MatrixXcd::Identity(n, n), rd_outer).eval();
  l.C = (rb * p.sigma_r2) * w;
  l.E = p.sigma_c2 * w;

  const MatrixXcd sr_outer_t = (ch.h_sr * ch.h_sr.adjoint()).transpose();
  const MatrixXcd dr_outer_t = (ch.h_dr * ch.h_dr.adjoint()).transpose();
  l.G = (rb * p.p_s) *
        Eigen::kroneckerProduct(sr_outer_t, MatrixXcd::Identity(n, n)).eval();
  l.J = (rb * p.p_d) *
        Eigen::kroneckerProduct(dr_outer_t, MatrixXcd::Identity(n, n)).eval();
  l.T = l.G + l.J +
        (rb * p.sigma_r2 + p.sigma_c2) * MatrixXcd::Identity(n2, n2);
  return l;
}

ObjectiveValue objective(PsRatio rho, const Beamformer& f,
                         const SystemParams& p, const ChannelSet& ch) {
  const double rb = rho.bar();
  ObjectiveValue out;

  const VectorXcd fh_sr = f.F * ch.h_sr;
  const double sig = rb * p.p_s * std::norm(cplx(ch.h_rd.dot(fh_sr)));
  const double fwd_noise =
      (rb * p.sigma_r2 + p.sigma_c2) * (f.F.adjoint() * ch.h_rd).squaredNorm();
  out.parts.f1 = 1.0 + sig / (fwd_noise + p.sigma_d2);

  if (p.equal_noise()) {
    const ScalarT st = scalar_t_equal_noise(rho.value(), p, ch);
    out.parts.t = st.t;
    out.parts.m = st.m;
    out.parts.n = st.n;
  } else {
    out.parts.t = relay_capacity_factor(rho, p, ch);
    out.parts.m = std::numeric_limits<double>::quiet_NaN();
    out.parts.n = std::numeric_limits<double>::quiet_NaN();
  }
  out.parts.f2 = 1.0 / out.parts.t;
  out.value = out.parts.f1 * out.parts.f2;
  return out;
}

ObjectiveValue objective(PsRatio rho, const VectorXcd& f_vec,
                         const SystemParams& p, const ChannelSet& ch) {
  return objective(rho, Beamformer::from_vec(f_vec, p.n_r), p, ch);
}

}  // namespace wpr
