#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace twist {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Invalid user input (bad configuration, out-of-range parameters).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced non-finite or unphysical values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point on the Bloch sphere; theta = 0 is the +z pole.
struct BlochDirection {
  double theta = 0.0;
  double phi = 0.0;

  Vec3 unit_vector() const;
  static BlochDirection from_vector(const Vec3& v);
};

/// Quadratic collective-spin Hamiltonian H = omega.J + J.chi.J.
///
/// chi is stored as its six independent components, so symmetry holds by
/// construction. Both chi and omega are rates (hbar = 1).
class TwistingTensor {
 public:
  TwistingTensor() = default;
  TwistingTensor(const Mat3& chi, const Vec3& omega);

  static TwistingTensor diagonal(double chi_x, double chi_y, double chi_z,
                                 const Vec3& omega = Vec3::Zero());
  /// Components in the order xx, yy, zz, xy, xz, yz.
  static TwistingTensor from_components(const std::array<double, 6>& c,
                                        const Vec3& omega = Vec3::Zero());

  double chi(int k, int l) const;
  Mat3 chi_matrix() const;
  const Vec3& omega() const { return omega_; }

  TwistingTensor with_omega(const Vec3& omega) const;
  /// chi + c * Identity; the spin Casimir absorbs the change.
  TwistingTensor trace_shifted(double c) const;
  TwistingTensor operator+(const TwistingTensor& other) const;
  bool is_diagonal() const;

 private:
  std::array<double, 6> c_{};  // xx yy zz xy xz yz
  Vec3 omega_ = Vec3::Zero();
};

/// Pure state of N two-mode bosons in the Dicke basis |j,m>, j = N/2.
/// Index 0 holds m = +j, index N holds m = -j.
struct SpinState {
  int n_particles = 0;
  CVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// First moments and symmetrized covariance of the collective spin.
struct MomentState {
  Vec3 mean = Vec3::Zero();
  Mat3 variance = Mat3::Zero();
};

/// One sample of a squeezing trajectory. Times are scaled, tau = N t.
/// rate is the optimal squeezing rate per unit tau.
struct SqueezingRecord {
  double tau = 0.0;
  MomentState moments;
  double xi2 = 1.0;
  double alpha = 0.0;
  double rate = 0.0;
};

using Trajectory = std::vector<SqueezingRecord>;

}  // namespace twist
