#include "twist/gaussian_engine.hpp"

#include "twist/analytic.hpp"
#include "twist/exact_engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twist {

namespace {

constexpr double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

int step_count(const IntegrationOptions& opts) {
  if (!(opts.dtau > 0.0)) throw std::invalid_argument("integration step must be > 0");
  if (!(opts.tau_max >= 0.0)) throw std::invalid_argument("tau_max must be >= 0");
  if (opts.stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (opts.tau_max == 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(opts.tau_max / opts.dtau - 1e-9)));
}

template <class State, class Deriv, class Axpy>
State rk4_step(const State& y, double h, Deriv&& f, Axpy&& axpy) {
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * h, k1));
  const auto k3 = f(axpy(y, 0.5 * h, k2));
  const auto k4 = f(axpy(y, h, k3));
  State out = axpy(y, h / 6.0, k1);
  out = axpy(out, h / 3.0, k2);
  out = axpy(out, h / 3.0, k3);
  return axpy(out, h / 6.0, k4);
}

std::string at_row(double tau, std::size_t row) {
  return " at tau = " + std::to_string(tau) + " (row " + std::to_string(row) + ")";
}

}  // namespace

std::vector<double> sample_taus(const IntegrationOptions& opts) {
  const int steps = step_count(opts);
  const double h = steps > 0 ? opts.tau_max / steps : 0.0;
  std::vector<double> taus{0.0};
  for (int i = 1; i <= steps; ++i)
    if (i % opts.stride == 0 || i == steps) taus.push_back(i * h);
  return taus;
}

MomentDerivatives moment_derivatives(const MomentState& m, const TwistingTensor& t) {
  const Vec3& mean = m.mean;
  const Mat3& var = m.variance;
  const Mat3 chi = t.chi_matrix();
  const Vec3 precession = t.omega() + 2.0 * chi * mean;

  MomentDerivatives d;
  for (int j = 0; j < 3; ++j) {
    double acc = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const double e = levi_civita(j, k, l);
        if (e == 0.0) continue;
        double quad = 0.0;
        for (int n = 0; n < 3; ++n) quad += chi(k, n) * (mean[n] * mean[l] + var(n, l));
        acc += e * (t.omega()[k] * mean[l] + 2.0 * quad);
      }
    d.d_mean[j] = acc;
  }

  for (int k = 0; k < 3; ++k)
    for (int l = k; l < 3; ++l) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int p = 0; p < 3; ++p) {
          const double e_lj = levi_civita(p, l, j);
          const double e_kj = levi_civita(p, k, j);
          if (e_lj == 0.0 && e_kj == 0.0) continue;
          acc += precession[j] * (e_lj * var(p, k) + e_kj * var(p, l));
          for (int s = 0; s < 3; ++s)
            acc += 2.0 * chi(j, s) * mean[p] * (e_lj * var(s, k) + e_kj * var(s, l));
        }
      d.d_variance(k, l) = acc;
      d.d_variance(l, k) = acc;
    }
  return d;
}

Trajectory integrate_full(const MomentState& m0, const TwistingTensor& t, int n_particles,
                          const ControlLaw& control, const IntegrationOptions& opts) {
  if (n_particles < 1) throw std::invalid_argument("integrate_full: N must be >= 1");
  const int steps = step_count(opts);
  const double h = steps > 0 ? opts.tau_max / steps : 0.0;
  const double inv_n = 1.0 / n_particles;
  const double coherent_var = 0.25 * n_particles;

  auto field = [&](const MomentState& m) {
    MomentDerivatives d = moment_derivatives(m, t.with_omega(control_omega(control, m, t)));
    d.d_mean *= inv_n;
    d.d_variance *= inv_n;
    return d;
  };
  auto axpy = [](const MomentState& y, double a, const MomentDerivatives& d) {
    return MomentState{y.mean + a * d.d_mean, y.variance + a * d.d_variance};
  };
  Trajectory out;
  auto check = [&](const MomentState& m, double tau) {
    if (!m.mean.allFinite() || !m.variance.allFinite())
      throw NumericError("non-finite moments" + at_row(tau, out.size()));
    if (m.mean.norm() == 0.0) return;
    const auto [e1, e2] = transverse_frame(m.mean);
    const double det = (e1.dot(m.variance * e1) * e2.dot(m.variance * e2) -
                        std::pow(e1.dot(m.variance * e2), 2)) /
                       (coherent_var * coherent_var);
    if (det < -1e-6)
      throw NumericError("transverse variance lost positivity" + at_row(tau, out.size()));
  };

  MomentState m = m0;
  check(m, 0.0);
  out.push_back(make_record(0.0, m, n_particles, t));
  for (int i = 1; i <= steps; ++i) {
    m = rk4_step(m, h, field, axpy);
    const double tau = i * h;
    check(m, tau);
    if (i % opts.stride == 0 || i == steps) out.push_back(make_record(tau, m, n_particles, t));
  }
  return out;
}

double optimal_omega_tilde(const DiagonalChi& chi, double j) {
  return j * (0.5 * (chi.x + chi.y) - chi.z);
}

std::vector<ScaledRecord> integrate_scaled(const ScaledMomentState& s0, const DiagonalChi& chi,
                                           const ScaledControl& control,
                                           std::optional<int> n_particles,
                                           const IntegrationOptions& opts) {
  if (n_particles && *n_particles < 1) throw std::invalid_argument("integrate_scaled: N must be >= 1");
  const int steps = step_count(opts);
  const double h = steps > 0 ? opts.tau_max / steps : 0.0;
  const double backreaction = n_particles ? 1.0 / *n_particles : 0.0;

  auto omega_of = [&](const ScaledMomentState& s) {
    if (const auto* fixed = std::get_if<ScaledRotation>(&control)) return fixed->omega_tilde;
    return optimal_omega_tilde(chi, s.j);
  };
  auto field = [&](const ScaledMomentState& s) {
    const double w = omega_of(s);
    return ScaledMomentState{
        2.0 * (-w + (chi.y - chi.z) * s.j) * s.v_xy,
        2.0 * (w - (chi.x - chi.z) * s.j) * s.v_xy,
        w * (s.v_xx - s.v_yy) + s.j * ((chi.z - chi.x) * s.v_xx - (chi.z - chi.y) * s.v_yy),
        backreaction * (chi.x - chi.y) * s.v_xy};
  };
  auto axpy = [](const ScaledMomentState& y, double a, const ScaledMomentState& d) {
    return ScaledMomentState{y.v_xx + a * d.v_xx, y.v_yy + a * d.v_yy, y.v_xy + a * d.v_xy,
                             y.j + a * d.j};
  };
  std::vector<ScaledRecord> out;
  auto record = [&](double tau, const ScaledMomentState& s) {
    if (!std::isfinite(s.v_xx) || !std::isfinite(s.v_yy) || !std::isfinite(s.v_xy) ||
        !std::isfinite(s.j))
      throw NumericError("non-finite scaled moments" + at_row(tau, out.size()));
    if (s.determinant() < -1e-6)
      throw NumericError("transverse variance lost positivity" + at_row(tau, out.size()));
    const PrincipalVariances pv = principal_variances(s.v_xx, s.v_yy, s.v_xy);
    // Tangent frame at the south pole is (x, -y), which flips the sign of v_xy.
    const double alpha = minor_axis_angle(s.v_xx, s.v_yy, s.j < 0.0 ? -s.v_xy : s.v_xy);
    const BlochDirection pole{s.j < 0.0 ? std::numbers::pi : 0.0, 0.0};
    const double q = squeezing_rate(chi.x, chi.y, chi.z, pole, 0.5 * std::abs(s.j)).rate;
    return ScaledRecord{tau, s, omega_of(s), pv.minus, alpha, q};
  };

  ScaledMomentState s = s0;
  out.push_back(record(0.0, s));
  for (int i = 1; i <= steps; ++i) {
    s = rk4_step(s, h, field, axpy);
    const double tau = i * h;
    ScaledRecord r = record(tau, s);
    if (i % opts.stride == 0 || i == steps) out.push_back(r);
  }
  return out;
}

}  // namespace twist
