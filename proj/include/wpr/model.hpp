#pragma once

#include "wpr/types.hpp"

namespace wpr {

/// Hermitian quadratic form Re(f^H M f). M must be Hermitian; the real
/// part is taken to discard rounding's imaginary dust.
inline double herm_quad(const MatrixXcd& m, const VectorXcd& f) {
  return std::real(cplx(f.dot(m * f)));
}

/// Covariance of the relay's post-split receive interference-plus-noise,
///   A(rho) = (1-rho) p_d h_dr h_dr^H + ((1-rho) sigma_r2 + sigma_c2) I.
MatrixXcd matrix_a(PsRatio rho, const SystemParams& p, const ChannelSet& ch);

/// Closed-form inverse of matrix_a via a rank-one downdate
/// (Sherman-Morrison on the scaled identity). Requires equal noise
/// variances; throws std::invalid_argument otherwise.
MatrixXcd inverse_a_smw(PsRatio rho, const SystemParams& p,
                        const ChannelSet& ch);

/// One plus the relay's effective SINR on the source symbol, i.e.
/// 2^(relay rate). Works for unequal noise variances.
double relay_capacity_factor(PsRatio rho, const SystemParams& p,
                             const ChannelSet& ch);

/// Rate decodable by the (untrusted) relay, log2 of relay_capacity_factor.
double relay_rate(PsRatio rho, const SystemParams& p, const ChannelSet& ch);

/// Power harvested by the relay from the rho-fraction of its receive
/// signal: eta * rho * (p_s ||h_sr||^2 + p_d ||h_dr||^2 + sigma_r2 n_r).
double harvested_power(PsRatio rho, const SystemParams& p,
                       const ChannelSet& ch);

/// Rate decodable by the destination after self-interference cancellation.
double destination_rate(const Beamformer& f, PsRatio rho,
                        const SystemParams& p, const ChannelSet& ch);

/// Achievable secrecy rate 0.5 * max(0, destination_rate - relay_rate).
double secrecy_rate(const Beamformer& f, PsRatio rho, const SystemParams& p,
                    const ChannelSet& ch);

/// Transmit power the relay spends applying F to its split receive signal,
/// equal to f^H T f in the lifted coordinates.
double relay_power_used(const Beamformer& f, PsRatio rho,
                        const SystemParams& p, const ChannelSet& ch);

/// Assemble the lifted quadratic-form matrices at a fixed power split.
LiftedMatrices lifted_matrices(PsRatio rho, const SystemParams& p,
                               const ChannelSet& ch);

/// Joint objective f1 * f2 at (rho, F), where log2 of the value equals
/// destination_rate - relay_rate (before clamping at zero). The parts
/// carry the factor split; m and n are populated only for equal noise.
ObjectiveValue objective(PsRatio rho, const Beamformer& f,
                         const SystemParams& p, const ChannelSet& ch);

/// Same, for an already-vectorized beamformer.
ObjectiveValue objective(PsRatio rho, const VectorXcd& f_vec,
                         const SystemParams& p, const ChannelSet& ch);

}  // namespace wpr
