#include "twist/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twist {

const BandMatrix& AngularMomentumSet::operator[](int k) const {
  switch (k) {
    case 0: return jx;
    case 1: return jy;
    case 2: return jz;
    default: throw std::out_of_range("spin component index");
  }
}

AngularMomentumSet angular_momentum_matrices(int n_particles) {
  if (n_particles < 1) throw std::invalid_argument("angular_momentum_matrices: N must be >= 1");
  const int dim = n_particles + 1;
  const double j = 0.5 * n_particles;

  AngularMomentumSet ops;
  ops.n_particles = n_particles;
  ops.jz = BandMatrix(dim);
  BandMatrix raise(dim);
  for (int i = 0; i < dim; ++i) {
    const double m = j - i;
    ops.jz.ref(i, 0) = m;
    // <m+1| J+ |m> sits at row i-1, column i.
    if (i > 0) raise.ref(i - 1, 1) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const BandMatrix lower = raise.adjoint();
  ops.jx = (raise + lower) * Complex(0.5, 0.0);
  ops.jy = (raise + lower * Complex(-1.0, 0.0)) * Complex(0.0, -0.5);
  return ops;
}

double coherent_weight(int n, int k, double a, double b) {
  if (k < 0 || k > n) return 0.0;
  if ((a == 0.0 && n - k > 0) || (b == 0.0 && k > 0)) return 0.0;
  if (n > 500) {
    const double log_binom =
        std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    double log_w = 0.5 * log_binom;
    if (n - k > 0) log_w += (n - k) * std::log(a);
    if (k > 0) log_w += k * std::log(b);
    return std::exp(log_w);
  }
  double binom = 1.0;
  const int kk = std::min(k, n - k);
  for (int i = 1; i <= kk; ++i) binom = binom * (n - kk + i) / i;
  return std::sqrt(binom) * std::pow(a, n - k) * std::pow(b, k);
}

SpinState coherent_state(int n_particles, const BlochDirection& dir) {
  if (n_particles < 1) throw std::invalid_argument("coherent_state: N must be >= 1");
  const double c = std::abs(std::cos(0.5 * dir.theta));
  const double s = std::abs(std::sin(0.5 * dir.theta));
  SpinState state{n_particles, CVector(n_particles + 1)};
  for (int k = 0; k <= n_particles; ++k)
    state.amplitudes[k] = coherent_weight(n_particles, k, c, s) * std::polar(1.0, k * dir.phi);
  state.amplitudes /= state.amplitudes.norm();
  return state;
}

Mat3 rotation_about_axis(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

bool is_proper_rotation(const Mat3& r, double tol) {
  return (r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(r.determinant() - 1.0) < tol;
}

TwistingTensor rotate_tensor(const TwistingTensor& t, const Mat3& r) {
  if (!is_proper_rotation(r)) throw std::invalid_argument("rotate_tensor: not a proper rotation");
  return {r * t.chi_matrix() * r.transpose(), r * t.omega()};
}

const char* to_string(TwistClass c) {
  switch (c) {
    case TwistClass::Free: return "FREE";
    case TwistClass::OneAxis: return "OAT";
    case TwistClass::TwoAxisCounter: return "TACT";
    case TwistClass::General: return "GENERAL";
  }
  return "?";
}

TwistClass classify_eigenvalues(double lo, double mid, double hi) {
  // Shift so the middle eigenvalue is zero; the spin Casimir absorbs it.
  const double upper = hi - mid;
  const double lower = mid - lo;
  const double spread = upper + lower;
  const double scale = std::max({std::abs(lo), std::abs(mid), std::abs(hi)});
  if (spread <= 1e-12 * scale || spread == 0.0) return TwistClass::Free;
  const double tol = 1e-9 * spread;
  if (upper <= tol || lower <= tol) return TwistClass::OneAxis;
  if (std::abs(upper - lower) <= 2.0 * tol) return TwistClass::TwoAxisCounter;
  return TwistClass::General;
}

CanonicalTensor canonicalize_tensor(const TwistingTensor& t) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(t.chi_matrix());
  const Vec3 ev = solver.eigenvalues();  // ascending
  const Mat3 vecs = solver.eigenvectors();

  CanonicalTensor out;
  out.chi_y = ev[0];
  out.chi_z = ev[1];
  out.chi_x = ev[2];
  out.frame.row(0) = vecs.col(2).transpose();
  out.frame.row(1) = vecs.col(0).transpose();
  out.frame.row(2) = vecs.col(1).transpose();
  if (out.frame.determinant() < 0.0) out.frame.row(2) *= -1.0;
  out.kind = classify_eigenvalues(out.chi_y, out.chi_z, out.chi_x);
  return out;
}

PoleFrame pole_frame(const TwistingTensor& t, const Vec3& direction) {
  const double r = direction.norm();
  if (r == 0.0) throw std::invalid_argument("pole_frame: zero direction");
  const Vec3 z = direction / r;
  Vec3 seed = Vec3::UnitX();
  if (std::abs(z.dot(seed)) > 0.9) seed = Vec3::UnitY();
  const Vec3 e1 = (seed - z * z.dot(seed)).normalized();
  const Vec3 e2 = z.cross(e1);

  const Mat3 chi = t.chi_matrix();
  const double b11 = e1.dot(chi * e1);
  const double b22 = e2.dot(chi * e2);
  const double b12 = e1.dot(chi * e2);
  const double psi = 0.5 * std::atan2(2.0 * b12, b11 - b22);

  PoleFrame f;
  const Vec3 x = std::cos(psi) * e1 + std::sin(psi) * e2;
  const Vec3 y = z.cross(x);
  f.axes.row(0) = x.transpose();
  f.axes.row(1) = y.transpose();
  f.axes.row(2) = z.transpose();
  f.chi_x = x.dot(chi * x);
  f.chi_y = y.dot(chi * y);
  f.chi_z = z.dot(chi * z);
  return f;
}

}  // namespace twist
