#pragma once

#include "twist/band_matrix.hpp"
#include "twist/types.hpp"

#include <array>

namespace twist {

/// J_x, J_y, J_z in the spin-N/2 Dicke representation, basis ordered m = j..-j.
struct AngularMomentumSet {
  int n_particles = 0;
  BandMatrix jx;
  BandMatrix jy;
  BandMatrix jz;

  int dim() const { return n_particles + 1; }
  double spin() const { return 0.5 * n_particles; }
  const BandMatrix& operator[](int k) const;
};

AngularMomentumSet angular_momentum_matrices(int n_particles);

/// Spin coherent state pointing along dir.
///
/// c_m = sqrt(C(N, j+m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2) e^{+i(j-m)phi},
/// so <J> = (N/2)(sin theta cos phi, sin theta sin phi, cos theta) and
/// evolution under H = Omega J_z advances phi by Omega t.
SpinState coherent_state(int n_particles, const BlochDirection& dir);

/// sqrt(C(n, k)) * a^(n-k) * b^k for a, b >= 0, in log space for large n.
double coherent_weight(int n, int k, double a, double b);

/// chi' = R chi R^T, omega' = R omega. R must be a proper rotation.
TwistingTensor rotate_tensor(const TwistingTensor& t, const Mat3& r);

Mat3 rotation_about_axis(const Vec3& axis, double angle);
bool is_proper_rotation(const Mat3& r, double tol = 1e-10);

enum class TwistClass { Free, OneAxis, TwoAxisCounter, General };

const char* to_string(TwistClass c);

struct CanonicalTensor {
  /// Labelled so that chi_y <= chi_z <= chi_x.
  double chi_x = 0.0;
  double chi_y = 0.0;
  double chi_z = 0.0;
  /// Rows are the eigen-axes x, y, z; frame * chi * frame^T is diagonal.
  /// det(frame) = +1.
  Mat3 frame = Mat3::Identity();
  TwistClass kind = TwistClass::Free;

  std::array<double, 3> ascending() const { return {chi_y, chi_z, chi_x}; }
};

CanonicalTensor canonicalize_tensor(const TwistingTensor& t);

TwistClass classify_eigenvalues(double lo, double mid, double hi);

/// Frame attached to a mean-spin direction: z along the direction, x and y
/// along the principal axes of the transverse block of chi (chi'_xy = 0,
/// chi'_xx >= chi'_yy). Used by the pole-lock control.
struct PoleFrame {
  Mat3 axes = Mat3::Identity();  // rows x, y, z
  double chi_x = 0.0;
  double chi_y = 0.0;
  double chi_z = 0.0;
};

PoleFrame pole_frame(const TwistingTensor& t, const Vec3& direction);

}  // namespace twist
