#pragma once

#include "twist/control.hpp"
#include "twist/types.hpp"

#include <optional>
#include <variant>

namespace twist {

/// Time derivatives of the Gaussian-closure moment equations (physical time).
struct MomentDerivatives {
  Vec3 d_mean = Vec3::Zero();
  Mat3 d_variance = Mat3::Zero();
};

/// dJ_j/dt = e_jkl [w_k J_l + 2 chi_kn (J_n J_l + V_nl)] and the closed
/// variance equation obtained by factorizing third moments.
MomentDerivatives moment_derivatives(const MomentState& m, const TwistingTensor& t);

struct IntegrationOptions {
  double tau_max = 3.0;
  double dtau = 1e-4;
  /// Record every `stride` steps; the final point is always recorded.
  int stride = 100;
};

/// Scaled times at which the integrators record: 0, every stride-th step and
/// the final step. The step is shrunk so the last one lands on tau_max.
std::vector<double> sample_taus(const IntegrationOptions& opts);

/// Classical RK4 on the 9-variable moment system in scaled time tau = N t.
/// The pole lock is evaluated inside the vector field. Throws NumericError on
/// non-finite values or a transverse determinant (scaled) below -1e-6.
Trajectory integrate_full(const MomentState& m0, const TwistingTensor& t, int n_particles,
                          const ControlLaw& control, const IntegrationOptions& opts);

/// Pole-frame state of the scaled system: V = (N/4) v, J_z = (N/2) j.
struct ScaledMomentState {
  double v_xx = 1.0;
  double v_yy = 1.0;
  double v_xy = 0.0;
  double j = 1.0;

  double determinant() const { return v_xx * v_yy - v_xy * v_xy; }
};

struct ScaledRecord {
  double tau = 0.0;
  ScaledMomentState state;
  double omega_tilde = 0.0;
  double xi2 = 1.0;
  double alpha = 0.0;
  double rate = 0.0;  // per unit tau
};

/// Diagonal twisting tensor in the pole frame; need not be sorted.
struct DiagonalChi {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ScaledRotation {
  double omega_tilde = 0.0;
};
struct ScaledPoleLock {};
using ScaledControl = std::variant<ScaledRotation, ScaledPoleLock>;

/// omega_tilde = j ((chi_x + chi_y)/2 - chi_z).
double optimal_omega_tilde(const DiagonalChi& chi, double j);

/// Integrates the reduced pole-frame equations. With n_particles empty
/// (N -> infinity) dj/dtau = 0.
std::vector<ScaledRecord> integrate_scaled(const ScaledMomentState& s0, const DiagonalChi& chi,
                                           const ScaledControl& control,
                                           std::optional<int> n_particles,
                                           const IntegrationOptions& opts);

}  // namespace twist
