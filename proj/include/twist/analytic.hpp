#pragma once

#include "twist/bloch_grid.hpp"
#include "twist/types.hpp"

namespace twist {

/// Gaps of a sorted twisting-tensor spectrum chi_x >= chi_z >= chi_y.
struct ChiGaps {
  double d_chi_x = 0.0;  // chi_x - chi_z
  double d_chi_y = 0.0;  // chi_z - chi_y

  static ChiGaps from_eigenvalues(double chi_x, double chi_y, double chi_z);
  double d_chi() const;  // 2 sqrt(d_chi_x d_chi_y)
};

struct RateResult {
  double rate = 0.0;
  /// Minor-axis orientation in the tangent frame (e_theta, e_phi), in [0, pi).
  /// Follows tan 2 alpha = (chi'_xx - chi'_yy) / (2 chi'_xy): alpha increases
  /// from e_theta towards -e_phi. At the poles phi is taken as 0, so alpha is
  /// measured from the x-axis.
  double alpha = 0.0;
};

/// Optimal squeezing rate Q and ellipse angle for a state of length j_norm
/// pointing along dir, with chi diagonal (chi_x, chi_y, chi_z).
RateResult squeezing_rate(double chi_x, double chi_y, double chi_z,
                          const BlochDirection& dir, double j_norm);

/// Same quantities evaluated by rotating the full tensor into the frame whose
/// z-axis is dir. Works for non-diagonal chi.
RateResult squeezing_rate_in_frame(const Mat3& chi, const BlochDirection& dir,
                                   double j_norm);

struct PrincipalVariances {
  double plus = 0.0;
  double minus = 0.0;
};

PrincipalVariances principal_variances(double v_xx, double v_yy, double v_xy);

/// Orientation of the minor axis of [[v_xx, v_xy], [v_xy, v_yy]], measured
/// from the first axis towards minus the second, in [0, pi).
double minor_axis_angle(double v_xx, double v_yy, double v_xy);

struct ScaledVariances {
  double v_xx = 1.0;
  double v_yy = 1.0;
  double v_xy = 0.0;
};

/// Transverse variances for free twisting (no rotation) from a coherent
/// state. v_xy carries the sign of a state at the south pole (j = -1); a
/// north-pole state has the opposite sign.
ScaledVariances variance_closed_form(const ChiGaps& gaps, double tau);

double xi2_closed_form(const ChiGaps& gaps, double tau);

/// One-axis limit: 1 - x sqrt(1 + x^2/4) + x^2/2, x = d_chi tau.
double xi2_one_axis(double d_chi_x_tau);

/// Closed-form moments of a spin coherent state: mean (N/2) n and
/// covariance (N/4)(1 - n n^T).
MomentState coherent_moments(int n_particles, const BlochDirection& dir);

/// <H> = omega.J + sum chi_kl (J_k J_l + V_kl) for given moments.
double mean_energy(const TwistingTensor& t, const MomentState& m);

struct Landscape {
  BlochGrid energy;
  BlochGrid rate;
};

/// Coherent-state energy and squeezing rate (|J| = N/2) over the sphere.
Landscape landscape(const TwistingTensor& t, int n_particles, const GridSpec& grid);

}  // namespace twist
