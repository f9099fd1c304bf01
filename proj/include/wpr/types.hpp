#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace wpr {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

/// Convert a power level from dBm to linear milliwatts.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Convert a power level from linear milliwatts to dBm.
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Static scenario parameters. All powers and noise variances are linear
/// milliwatts; antenna count is the relay array size.
struct SystemParams {
  double p_s = 0.0;       ///< source transmit power (mW)
  double p_d = 0.0;       ///< destination jamming/energy power (mW)
  double sigma_r2 = 1.0;  ///< relay antenna noise variance (mW)
  double sigma_c2 = 1.0;  ///< relay conversion noise variance (mW)
  double sigma_d2 = 1.0;  ///< destination noise variance (mW)
  double eta = 1.0;       ///< energy-harvesting efficiency, in (0, 1]
  int n_r = 1;            ///< number of relay antennas

  /// True when all three noise variances coincide (enables the scalar
  /// closed-form routes).
  bool equal_noise() const {
    return sigma_r2 == sigma_c2 && sigma_c2 == sigma_d2;
  }

  /// Throws std::invalid_argument naming the offending field if any
  /// parameter is outside its domain.
  void validate() const {
    auto fail = [](const std::string& what) {
      throw std::invalid_argument("SystemParams: " + what);
    };
    if (!(p_s > 0.0) || !std::isfinite(p_s)) fail("p_s must be positive");
    if (!(p_d > 0.0) || !std::isfinite(p_d)) fail("p_d must be positive");
    if (!(sigma_r2 > 0.0)) fail("sigma_r2 must be positive");
    if (!(sigma_c2 > 0.0)) fail("sigma_c2 must be positive");
    if (!(sigma_d2 > 0.0)) fail("sigma_d2 must be positive");
    if (!(eta > 0.0) || eta > 1.0) fail("eta must be in (0, 1]");
    if (n_r < 1) fail("n_r must be at least 1");
  }
};

/// One fading realization: source->relay, destination->relay and
/// relay->destination channel vectors, each of length n_r.
struct ChannelSet {
  VectorXcd h_sr;
  VectorXcd h_dr;
  VectorXcd h_rd;

  /// Throws std::invalid_argument if the three vectors disagree in length
  /// or do not match n_r.
  void validate(int n_r) const {
    if (h_sr.size() != n_r || h_dr.size() != n_r || h_rd.size() != n_r)
      throw std::invalid_argument(
          "ChannelSet: channel vectors must all have length n_r");
  }
};

/// Power-splitting ratio in [0, 1]: the fraction of received relay power
/// diverted to energy harvesting. Construction enforces the range.
class PsRatio {
 public:
  PsRatio() = default;
  explicit PsRatio(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0))
      throw std::invalid_argument("PsRatio: value must lie in [0, 1]");
  }
  double value() const { return value_; }
  /// 1 - rho, the fraction routed to information decoding.
  double bar() const { return 1.0 - value_; }

 private:
  double value_ = 0.0;
};

/// Relay amplify-and-forward weight matrix, with helpers to move between
/// matrix form and the stacked column vector used by the lifted solvers.
struct Beamformer {
  MatrixXcd F;

  Beamformer() = default;
  explicit Beamformer(MatrixXcd f_mat) : F(std::move(f_mat)) {}

  /// Column-major stacking of F into a length n_r^2 vector.
  VectorXcd vec() const {
    return Eigen::Map<const VectorXcd>(F.data(), F.size());
  }

  /// Rebuild an n_r x n_r matrix from its column stacking.
  static Beamformer from_vec(const VectorXcd& f, int n_r) {
    if (f.size() != static_cast<Eigen::Index>(n_r) * n_r)
      throw std::invalid_argument("Beamformer: vector length must be n_r^2");
    return Beamformer(
        Eigen::Map<const MatrixXcd>(f.data(), n_r, n_r));
  }
};

/// Quadratic-form data of the lifted (vectorized) inner problem at a fixed
/// power split. For f = vec(F):
///   signal power        = f^H B f
///   forwarded noise     = f^H C f   (antenna leg) + f^H E f (conversion leg)
///   relay transmit power = f^H T f,  with T = G + J + noise terms.
/// b_vec is the rank-one factor of B: B = p_s * (1-rho) * b_vec b_vec^H.
struct LiftedMatrices {
  MatrixXcd B;
  MatrixXcd C;
  MatrixXcd E;
  MatrixXcd G;
  MatrixXcd J;
  MatrixXcd T;
  VectorXcd b_vec;
};

/// Multiplicative split of the joint objective at a point (rho, f):
/// value = f1 * f2 with f1 the destination-SINR factor and f2 = 1/t the
/// reciprocal of the relay's intercept factor. m and n are the scalar
/// factors of the equal-noise expansion t = 1 + m*n (NaN when the noise
/// variances differ).
struct ObjectiveParts {
  double f1 = 0.0;
  double f2 = 0.0;
  double t = 0.0;
  double m = 0.0;
  double n = 0.0;
};

struct ObjectiveValue {
  double value = 0.0;  ///< f1 * f2; secrecy rate is 0.5 * max(0, log2(value))
  ObjectiveParts parts;
};

/// Thrown when an iterative solver cannot produce a usable answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wpr
