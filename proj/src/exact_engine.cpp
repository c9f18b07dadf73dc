#include "twist/exact_engine.hpp"

#include "twist/analytic.hpp"
#include "twist/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace twist {

BandMatrix build_hamiltonian_band(const TwistingTensor& t, const AngularMomentumSet& ops) {
  BandMatrix h(ops.dim());
  for (int k = 0; k < 3; ++k) {
    if (t.omega()[k] != 0.0) h += ops[k] * Complex(t.omega()[k], 0.0);
    for (int l = 0; l < 3; ++l) {
      const double c = t.chi(k, l);
      if (c != 0.0) h += ops[k].multiply(ops[l]) * Complex(c, 0.0);
    }
  }
  return h;
}

CMatrix build_hamiltonian(const TwistingTensor& t, const AngularMomentumSet& ops) {
  return build_hamiltonian_band(t, ops).to_dense();
}

ExactPropagator::ExactPropagator(const CMatrix& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw NumericError("Hamiltonian eigendecomposition failed");
  energies_ = solver.eigenvalues();
  basis_ = solver.eigenvectors();
}

CVector ExactPropagator::apply(const CVector& psi, double time) const {
  CVector coeffs = basis_.adjoint() * psi;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs[i] *= std::polar(1.0, -energies_[i] * time);
  return basis_ * coeffs;
}

void taylor_step(const BandMatrix& h, double dt, CVector& psi) {
  double h_norm = 0.0;
  for (int i = 0; i < h.dim(); ++i) {
    double row = 0.0;
    for (int off = -BandMatrix::kHalfWidth; off <= BandMatrix::kHalfWidth; ++off)
      row += std::abs(h.at(i, off));
    h_norm = std::max(h_norm, row);
  }
  const int substeps = std::max(1, static_cast<int>(std::ceil(h_norm * std::abs(dt) / 0.5)));
  const double h_dt = dt / substeps;

  CVector term(psi.size());
  CVector next(psi.size());
  for (int s = 0; s < substeps; ++s) {
    term = psi;
    for (int k = 1; k <= 60; ++k) {
      kernels::band_apply(h, term, next);
      term = next * Complex(0.0, -h_dt / k);
      psi += term;
      if (term.norm() <= 1e-17 * psi.norm()) break;
    }
  }
}

namespace {

void require_finite(const CVector& psi, double tau) {
  if (!psi.allFinite())
    throw NumericError("non-finite amplitudes at tau = " + std::to_string(tau));
}

}  // namespace

void evolve_exact_samples(const SpinState& state, const TwistingTensor& t,
                          std::span<const double> taus, const ControlLaw& control,
                          const ExactOptions& opts,
                          const std::function<void(double tau, const SpinState&)>& visit) {
  if (state.amplitudes.size() != state.n_particles + 1)
    throw std::invalid_argument("evolve_exact: amplitude count does not match N");
  require_finite(state.amplitudes, 0.0);
  for (std::size_t i = 0; i < taus.size(); ++i)
    if (taus[i] < 0.0 || (i > 0 && taus[i] < taus[i - 1]))
      throw std::invalid_argument("evolve_exact: sample times must be ascending and >= 0");

  const int n = state.n_particles;
  const AngularMomentumSet ops = angular_momentum_matrices(n);

  if (!std::holds_alternative<PoleLock>(control)) {
    TwistingTensor static_t = t;
    if (const auto* fixed = std::get_if<FixedRotation>(&control)) static_t = t.with_omega(fixed->omega);
    const ExactPropagator prop(build_hamiltonian(static_t, ops));
    for (double tau : taus) {
      SpinState s{n, tau == 0.0 ? state.amplitudes : prop.apply(state.amplitudes, tau / n)};
      require_finite(s.amplitudes, tau);
      visit(tau, s);
    }
    return;
  }

  if (!(opts.control_dtau > 0.0)) throw std::invalid_argument("evolve_exact: control step must be > 0");
  const BandMatrix h_twist = build_hamiltonian_band(t.with_omega(Vec3::Zero()), ops);
  SpinState current = state;
  double tau_now = 0.0;
  for (double tau : taus) {
    const double span = tau - tau_now;
    if (span > 0.0) {
      const int steps = std::max(1, static_cast<int>(std::ceil(span / opts.control_dtau - 1e-9)));
      const double h = span / steps;
      for (int s = 0; s < steps; ++s) {
        const Vec3 omega = control_omega(control, moments(current, ops), t);
        BandMatrix h_total = h_twist;
        for (int k = 0; k < 3; ++k) h_total += ops[k] * Complex(omega[k], 0.0);
        taylor_step(h_total, h / n, current.amplitudes);
        require_finite(current.amplitudes, tau_now + (s + 1) * h);
      }
      tau_now = tau;
    }
    visit(tau, current);
  }
}

SpinState evolve_exact(const SpinState& state, const TwistingTensor& t, double duration,
                       const ControlLaw& control, const ExactOptions& opts) {
  if (duration < 0.0) throw std::invalid_argument("evolve_exact: duration must be >= 0");
  SpinState out = state;
  const double tau = duration * state.n_particles;
  evolve_exact_samples(state, t, std::span<const double>(&tau, 1), control, opts,
                       [&](double, const SpinState& s) { out = s; });
  return out;
}

MomentState moments(const SpinState& state, const AngularMomentumSet& ops) {
  const CVector& psi = state.amplitudes;
  std::array<CVector, 3> shifted;
  MomentState m;
  for (int k = 0; k < 3; ++k) {
    kernels::band_apply(ops[k], psi, shifted[k]);
    m.mean[k] = psi.dot(shifted[k]).real();
    shifted[k] -= m.mean[k] * psi;
  }
  for (int k = 0; k < 3; ++k)
    for (int l = k; l < 3; ++l) {
      m.variance(k, l) = shifted[k].dot(shifted[l]).real();
      m.variance(l, k) = m.variance(k, l);
    }
  return m;
}

std::pair<Vec3, Vec3> transverse_frame(const Vec3& mean) {
  const Vec3 dir = mean.normalized();
  const Vec3 c = Vec3::UnitZ().cross(dir);
  Vec3 e1;
  if (c.norm() < 1e-6)
    e1 = (Vec3::UnitX() - dir * dir.x()).normalized();
  else
    e1 = c.normalized();
  return {e1, dir.cross(e1)};
}

SqueezingParameter squeezing_parameter(const MomentState& m, int n_particles) {
  if (m.mean.norm() < 1e-9 * 0.5 * n_particles)
    throw NumericError("squeezing parameter undefined: mean spin vanishes");
  const auto [e1, e2] = transverse_frame(m.mean);
  const double b11 = e1.dot(m.variance * e1);
  const double b22 = e2.dot(m.variance * e2);
  const double b12 = e1.dot(m.variance * e2);
  const PrincipalVariances pv = principal_variances(b11, b22, b12);
  return {pv.minus / (0.25 * n_particles), minor_axis_angle(b11, b22, b12)};
}

SqueezingRecord make_record(double tau, const MomentState& m, int n_particles,
                            const TwistingTensor& t) {
  const SqueezingParameter sp = squeezing_parameter(m, n_particles);
  const CanonicalTensor canon = canonicalize_tensor(t);
  const BlochDirection dir = BlochDirection::from_vector(canon.frame * m.mean);
  const double q = squeezing_rate(canon.chi_x, canon.chi_y, canon.chi_z, dir, m.mean.norm()).rate;
  return {tau, m, sp.xi2, sp.alpha, q / n_particles};
}

BlochGrid husimi(const SpinState& state, const GridSpec& grid) {
  BlochGrid out{grid, {}};
  kernels::husimi_grid(state, grid, out.values);
  return out;
}

}  // namespace twist
