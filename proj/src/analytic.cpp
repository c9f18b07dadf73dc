#include "twist/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twist {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_half_turn(double a) {
  a = std::fmod(a, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

// sinh(x)/x, accurate near zero.
double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
  return std::sinh(x) / x;
}

// Minor axis of the rate quadratic form; see RateResult for the convention.
double rate_alpha(double diff, double two_off) { return wrap_half_turn(-0.5 * std::atan2(diff, -two_off)); }

}  // namespace

ChiGaps ChiGaps::from_eigenvalues(double chi_x, double chi_y, double chi_z) {
  if (!(chi_x >= chi_z && chi_z >= chi_y))
    throw std::invalid_argument("ChiGaps: requires chi_x >= chi_z >= chi_y");
  return {chi_x - chi_z, chi_z - chi_y};
}

double ChiGaps::d_chi() const { return 2.0 * std::sqrt(d_chi_x * d_chi_y); }

RateResult squeezing_rate(double chi_x, double chi_y, double chi_z, const BlochDirection& dir,
                          double j_norm) {
  const double st = std::sin(dir.theta);
  const double ct = std::cos(dir.theta);
  const double phi = std::abs(st) < 1e-12 ? 0.0 : dir.phi;
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);

  const double diff = chi_x * (ct * ct * cp * cp - sp * sp) + chi_y * (ct * ct * sp * sp - cp * cp) +
                      chi_z * st * st;
  const double two_off = (chi_y - chi_x) * ct * std::sin(2.0 * phi);
  const double radicand =
      diff * diff + 4.0 * (chi_x - chi_y) * (chi_x - chi_y) * ct * ct * cp * cp * sp * sp;
  return {2.0 * std::abs(j_norm) * std::sqrt(radicand), rate_alpha(diff, two_off)};
}

RateResult squeezing_rate_in_frame(const Mat3& chi, const BlochDirection& dir, double j_norm) {
  const double st = std::sin(dir.theta);
  const double ct = std::cos(dir.theta);
  const double phi = std::abs(st) < 1e-12 ? 0.0 : dir.phi;
  const Vec3 e_theta(ct * std::cos(phi), ct * std::sin(phi), -st);
  const Vec3 e_phi(-std::sin(phi), std::cos(phi), 0.0);

  const double cxx = e_theta.dot(chi * e_theta);
  const double cyy = e_phi.dot(chi * e_phi);
  const double cxy = e_theta.dot(chi * e_phi);
  const double q = 2.0 * std::abs(j_norm) * std::sqrt((cxx - cyy) * (cxx - cyy) + 4.0 * cxy * cxy);
  return {q, rate_alpha(cxx - cyy, 2.0 * cxy)};
}

PrincipalVariances principal_variances(double v_xx, double v_yy, double v_xy) {
  const double mean = 0.5 * (v_xx + v_yy);
  const double half_diff = 0.5 * (v_xx - v_yy);
  const double r = std::sqrt(v_xy * v_xy + half_diff * half_diff);
  return {mean + r, mean - r};
}

double minor_axis_angle(double v_xx, double v_yy, double v_xy) {
  const double major = 0.5 * std::atan2(2.0 * v_xy, v_xx - v_yy);
  return wrap_half_turn(-(major + 0.5 * kPi));
}

ScaledVariances variance_closed_form(const ChiGaps& gaps, double tau) {
  const double dx = gaps.d_chi_x;
  const double dy = gaps.d_chi_y;
  if (dx < 0.0 || dy < 0.0) throw std::invalid_argument("variance_closed_form: negative gap");
  if (dx == 0.0 && dy == 0.0) return {};

  const double d_chi = gaps.d_chi();
  const double sum = dx + dy;
  if (dx > 0.0 && dy > 0.0 && d_chi * tau >= 1e-2) {
    const double ch = std::cosh(d_chi * tau);
    return {(sum * ch + dx - dy) / (2.0 * dx), (sum * ch + dy - dx) / (2.0 * dy),
            sum / (2.0 * std::sqrt(dx * dy)) * std::sinh(d_chi * tau)};
  }
  // Same expressions with cosh - 1 = 2 sinh^2 rewritten to cancel the gap
  // denominators; covers the one-axis limit where one gap vanishes.
  const double half = sinhc(0.5 * d_chi * tau);
  const double growth = tau * tau * half * half;
  return {1.0 + sum * dy * growth, 1.0 + sum * dx * growth, sum * tau * sinhc(d_chi * tau)};
}

double xi2_one_axis(double x) { return 1.0 - x * std::sqrt(1.0 + 0.25 * x * x) + 0.5 * x * x; }

double xi2_closed_form(const ChiGaps& gaps, double tau) {
  const double dx = gaps.d_chi_x;
  const double dy = gaps.d_chi_y;
  if (dx < 0.0 || dy < 0.0) throw std::invalid_argument("xi2_closed_form: negative gap");
  const double hi = std::max(dx, dy);
  const double lo = std::min(dx, dy);
  if (hi == 0.0 || tau == 0.0) return 1.0;
  if (lo <= 1e-12 * hi) return xi2_one_axis(hi * tau);
  const double d_chi = gaps.d_chi();
  if (hi - lo <= 1e-12 * hi) return std::exp(-d_chi * tau);

  const double sum = dx + dy;
  if (lo >= 1e-3 * hi && d_chi * tau >= 1e-2) {
    const double p2 = sum * sum;
    const double m2 = (dx - dy) * (dx - dy);
    const double ch = std::cosh(d_chi * tau);
    const double inner = p2 * p2 * ch * ch - 2.0 * m2 * p2 * ch + m2 * m2 - 16.0 * dx * dx * dy * dy;
    return (p2 * ch - m2 - std::sqrt(inner)) / (4.0 * dx * dy);
  }
  // Rationalized form: xi2 = a - sqrt(a^2 - 1) with a = 1 + (sum tau sinhc)^2 / 2.
  const double half = sinhc(0.5 * d_chi * tau);
  const double a_minus_one = 0.5 * sum * sum * tau * tau * half * half;
  return 1.0 / (1.0 + a_minus_one + std::sqrt(a_minus_one * (a_minus_one + 2.0)));
}

}  // namespace twist

#include "twist/kernels.hpp"

namespace twist {

MomentState coherent_moments(int n_particles, const BlochDirection& dir) {
  const Vec3 n = dir.unit_vector();
  return {0.5 * n_particles * n, 0.25 * n_particles * (Mat3::Identity() - n * n.transpose())};
}

double mean_energy(const TwistingTensor& t, const MomentState& m) {
  double e = t.omega().dot(m.mean);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) e += t.chi(k, l) * (m.mean[k] * m.mean[l] + m.variance(k, l));
  return e;
}

Landscape landscape(const TwistingTensor& t, int n_particles, const GridSpec& grid) {
  grid.validate();
  Landscape out{{grid, {}}, {grid, {}}};
  kernels::landscape_grid(t, n_particles, grid, out.energy.values, out.rate.values);
  return out;
}

}  // namespace twist
