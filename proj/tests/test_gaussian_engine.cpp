#include "test_util.hpp"
#include "twist/analytic.hpp"
#include "twist/exact_engine.hpp"
#include "twist/gaussian_engine.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace twist;
using std::numbers::pi;

namespace {

MomentState pole_state(int n, bool north = true) {
  return coherent_moments(n, {north ? 0.0 : pi, 0.0});
}

IntegrationOptions opts(double tau_max, double dtau, int stride) {
  IntegrationOptions o;
  o.tau_max = tau_max;
  o.dtau = dtau;
  o.stride = stride;
  return o;
}

}  // namespace

TEST_SUITE("gaussian_engine") {

TEST_CASE("derivatives at a pole under one-axis twisting about x") {
  const int n = 100;
  const double chi = 0.7;
  const MomentDerivatives d = moment_derivatives(pole_state(n), TwistingTensor::diagonal(chi, 0, 0));
  CHECK(d.d_mean.norm() < 1e-12);
  CHECK(d.d_variance(0, 1) == doctest::Approx(-chi * n * n / 4.0));
  CHECK(d.d_variance(1, 0) == d.d_variance(0, 1));
  CHECK(std::abs(d.d_variance(0, 0)) < 1e-12);
  CHECK(std::abs(d.d_variance(1, 1)) < 1e-12);
}

TEST_CASE("a pole state is stationary when the axis is an OAT axis") {
  const MomentDerivatives d = moment_derivatives(pole_state(50), TwistingTensor::diagonal(0, 0, 1.3));
  CHECK(d.d_mean.norm() < 1e-12);
  CHECK(d.d_variance.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("linear terms generate rigid rotation of the moments") {
  std::mt19937_64 rng(11);
  const Vec3 w(0.3, -1.1, 0.6);
  const MomentState m = coherent_moments(30, {1.1, 0.4});
  const MomentDerivatives d = moment_derivatives(m, TwistingTensor::diagonal(0, 0, 0, w));
  CHECK((d.d_mean - w.cross(m.mean)).norm() < 1e-12);
  Mat3 w_hat;
  w_hat << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  CHECK((d.d_variance - (w_hat * m.variance - m.variance * w_hat)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("derivatives are invariant under a trace shift") {
  std::mt19937_64 rng(12);
  const TwistingTensor t(twist::test::random_symmetric(rng), Vec3(0.2, 0.1, -0.4));
  const MomentState m = coherent_moments(40, {0.8, 2.2});
  const MomentDerivatives a = moment_derivatives(m, t);
  const MomentDerivatives b = moment_derivatives(m, t.trace_shifted(-2.5));
  CHECK((a.d_mean - b.d_mean).norm() < 1e-10);
  CHECK((a.d_variance - b.d_variance).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mean derivative matches the exact dynamics, variance to leading order") {
  std::mt19937_64 rng(13);
  for (int n : {50, 400}) {
    const TwistingTensor t(twist::test::random_symmetric(rng), Vec3(0.3, 0.0, -0.2));
    const BlochDirection dir{0.9, 0.7};
    const auto ops = angular_momentum_matrices(n);
    const SpinState s0 = coherent_state(n, dir);
    const double h = 1e-4 / n;
    const MomentState plus = moments(evolve_exact(s0, t, h), ops);
    const MomentState minus = moments(evolve_exact(s0, t, -0.0 + 0.0), ops);
    const MomentState plus2 = moments(evolve_exact(s0, t, 2 * h), ops);
    // Second-order forward difference.
    const Vec3 fd_mean = (-3 * minus.mean + 4 * plus.mean - plus2.mean) / (2 * h);
    const Mat3 fd_var = (-3 * minus.variance + 4 * plus.variance - plus2.variance) / (2 * h);
    const MomentDerivatives d = moment_derivatives(coherent_moments(n, dir), t);
    const double mean_scale = d.d_mean.norm() + n;
    CHECK((fd_mean - d.d_mean).norm() < 1e-4 * mean_scale);
    const double var_scale = d.d_variance.cwiseAbs().maxCoeff();
    CHECK((fd_var - d.d_variance).cwiseAbs().maxCoeff() < 4.0 / n * var_scale);
  }
}

TEST_CASE("no twisting leaves a coherent state unsqueezed") {
  const Trajectory tr = integrate_full(coherent_moments(200, {1.0, 0.5}),
                                       TwistingTensor::diagonal(0, 0, 0, Vec3(0, 0, 1)), 200,
                                       NoControl{}, opts(2.0, 1e-3, 50));
  REQUIRE(tr.size() == 41);
  CHECK(tr.front().tau == 0.0);
  CHECK(tr.back().tau == doctest::Approx(2.0).epsilon(1e-15));
  for (const auto& r : tr) CHECK(r.xi2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-axis countertwisting squeezes exponentially at large N") {
  const int n = 100000000;
  const Trajectory tr = integrate_full(pole_state(n), TwistingTensor::diagonal(1, 0, 0.5), n,
                                       NoControl{}, opts(3.0, 1e-3, 100));
  for (const auto& r : tr) CHECK(r.xi2 == doctest::Approx(std::exp(-r.tau)).epsilon(1e-6));
}

TEST_CASE("pole lock gives exp(-(chi_x - chi_y) tau) for a general tensor") {
  const int n = 100000000;
  const Trajectory tr = integrate_full(pole_state(n), TwistingTensor::diagonal(1, 0, 0.8), n,
                                       PoleLock{}, opts(3.0, 1e-3, 100));
  for (const auto& r : tr) {
    CHECK(r.xi2 == doctest::Approx(std::exp(-r.tau)).epsilon(1e-6));
    CHECK(std::hypot(r.moments.mean.x(), r.moments.mean.y()) < 1e-6 * r.moments.mean.norm());
  }
}

TEST_CASE("integrate_full validates its options") {
  const MomentState m = pole_state(10);
  const TwistingTensor t = TwistingTensor::diagonal(1, 0, 0.5);
  CHECK_THROWS_AS(integrate_full(m, t, 10, NoControl{}, opts(1.0, 0.0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_full(m, t, 10, NoControl{}, opts(1.0, 1e-3, 0)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_full(m, t, 0, NoControl{}, opts(1.0, 1e-3, 1)), std::invalid_argument);
}

TEST_CASE("scaled equations reproduce the free-twisting closed form") {
  const DiagonalChi chi{1.0, 0.0, 0.8};
  const ChiGaps gaps = ChiGaps::from_eigenvalues(1.0, 0.0, 0.8);
  const auto recs = integrate_scaled({1, 1, 0, -1}, chi, ScaledRotation{}, std::nullopt,
                                     opts(3.0, 1e-4, 100));
  for (const auto& r : recs) {
    const ScaledVariances v = variance_closed_form(gaps, r.tau);
    CHECK(r.state.v_xx == doctest::Approx(v.v_xx).epsilon(1e-10));
    CHECK(r.state.v_yy == doctest::Approx(v.v_yy).epsilon(1e-10));
    CHECK(r.state.v_xy == doctest::Approx(v.v_xy).epsilon(1e-10));
    CHECK(r.xi2 == doctest::Approx(xi2_closed_form(gaps, r.tau)).epsilon(1e-9));
    CHECK(r.state.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto& at1 = recs[100];
  REQUIRE(at1.tau == doctest::Approx(1.0));
  CHECK(at1.state.v_xx == doctest::Approx(1.843587365762).epsilon(1e-11));
  CHECK(at1.state.v_yy == doctest::Approx(1.210896841441).epsilon(1e-11));
  CHECK(at1.state.v_xy == doctest::Approx(1.110132477735).epsilon(1e-11));
  CHECK(at1.xi2 == doctest::Approx(0.372916134469).epsilon(1e-11));
}

TEST_CASE("closed form holds across a grid of gaps") {
  for (int a = 1; a <= 10; ++a) {
    for (int b = 1; b <= 10; ++b) {
      const double dx = 0.1 * a, dy = 0.1 * b;
      const ChiGaps gaps{dx, dy};
      const auto recs = integrate_scaled({1, 1, 0, -1}, {dx, -dy, 0.0}, ScaledRotation{}, std::nullopt,
                                         opts(3.0, 1e-4, 1000));
      double worst = 0.0;
      for (const auto& r : recs) {
        const ScaledVariances v = variance_closed_form(gaps, r.tau);
        worst = std::max({worst, std::abs(r.state.v_xx - v.v_xx), std::abs(r.state.v_yy - v.v_yy),
                          std::abs(r.state.v_xy - v.v_xy)});
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("north and south poles differ by the sign of v_xy") {
  const DiagonalChi chi{1.0, 0.0, 0.8};
  const auto s = integrate_scaled({1, 1, 0, -1}, chi, ScaledRotation{}, std::nullopt, opts(1.0, 1e-3, 1000));
  const auto n = integrate_scaled({1, 1, 0, 1}, chi, ScaledRotation{}, std::nullopt, opts(1.0, 1e-3, 1000));
  CHECK(n.back().state.v_xy == doctest::Approx(-s.back().state.v_xy));
  CHECK(n.back().state.v_xx == doctest::Approx(s.back().state.v_xx));
  CHECK(n.back().xi2 == doctest::Approx(s.back().xi2));
}

TEST_CASE("OAT and TACT special cases") {
  const auto oat = integrate_scaled({1, 1, 0, -1}, {1, 0, 0}, ScaledRotation{}, std::nullopt, opts(1.0, 1e-4, 10000));
  CHECK(oat.back().state.v_xx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oat.back().state.v_yy == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oat.back().state.v_xy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oat.back().xi2 == doctest::Approx(0.381966011250).epsilon(1e-11));

  const auto tact = integrate_scaled({1, 1, 0, 1}, {1, 0, 0.5}, ScaledRotation{}, std::nullopt, opts(1.0, 1e-4, 10000));
  CHECK(tact.back().state.v_xx == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
  CHECK(tact.back().state.v_xy == doctest::Approx(-std::sinh(1.0)).epsilon(1e-12));
  CHECK(tact.back().xi2 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("scaled pole lock") {
  CHECK(optimal_omega_tilde({1, 0, 0.5}, 1.0) == 0.0);
  CHECK(optimal_omega_tilde({1, 0, 0.8}, 1.0) == doctest::Approx(-0.3));
  CHECK(optimal_omega_tilde({1, 0, 0.8}, -1.0) == doctest::Approx(0.3));
  const auto recs = integrate_scaled({1, 1, 0, 1}, {1, 0, 0.8}, ScaledPoleLock{}, std::nullopt, opts(3.0, 1e-4, 1000));
  for (const auto& r : recs) {
    CHECK(r.xi2 == doctest::Approx(std::exp(-r.tau)).epsilon(1e-10));
    CHECK(r.omega_tilde == doctest::Approx(-0.3));
    if (r.tau > 0.0) CHECK(r.alpha == doctest::Approx(3 * pi / 4).epsilon(1e-9));
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const DiagonalChi chi{1.0, 0.0, 0.8};
  const ChiGaps gaps = ChiGaps::from_eigenvalues(1.0, 0.0, 0.8);
  const ScaledVariances exact = variance_closed_form(gaps, 2.0);
  auto err = [&](double h) {
    const auto r = integrate_scaled({1, 1, 0, -1}, chi, ScaledRotation{}, std::nullopt, opts(2.0, h, 1000000)).back();
    return std::abs(r.state.v_xx - exact.v_xx) + std::abs(r.state.v_yy - exact.v_yy) +
           std::abs(r.state.v_xy - exact.v_xy);
  };
  const double ratio = err(0.1) / err(0.05);
  CHECK(ratio >= 10.0);
  CHECK(ratio <= 30.0);
}

TEST_CASE("finite N shortens the spin monotonically") {
  for (double j0 : {1.0, -1.0}) {
    const auto recs = integrate_scaled({1, 1, 0, j0}, {1, 0, 0.8}, ScaledRotation{}, 200, opts(3.0, 1e-3, 10));
    for (std::size_t i = 1; i < recs.size(); ++i)
      CHECK(std::abs(recs[i].state.j) <= std::abs(recs[i - 1].state.j) + 1e-15);
    CHECK(std::abs(recs.back().state.j) < 1.0);
  }
}

TEST_CASE("full and scaled engines agree for a diagonal tensor from a pole") {
  const int n = 1000;
  for (bool north : {true, false}) {
    for (bool lock : {false, true}) {
      const TwistingTensor t = TwistingTensor::diagonal(1, 0, 0.8);
      const auto o = opts(2.0, 1e-3, 100);
      const Trajectory full = lock ? integrate_full(pole_state(n, north), t, n, PoleLock{}, o)
                                   : integrate_full(pole_state(n, north), t, n, NoControl{}, o);
      const ScaledControl sc = lock ? ScaledControl{ScaledPoleLock{}} : ScaledControl{ScaledRotation{}};
      const auto scaled = integrate_scaled({1, 1, 0, north ? 1.0 : -1.0}, {1, 0, 0.8}, sc, n, o);
      REQUIRE(full.size() == scaled.size());
      for (std::size_t i = 0; i < full.size(); ++i) {
        const auto& f = full[i];
        const auto& s = scaled[i];
        CHECK(f.moments.variance(0, 0) / (n / 4.0) == doctest::Approx(s.state.v_xx).epsilon(1e-9));
        CHECK(f.moments.variance(1, 1) / (n / 4.0) == doctest::Approx(s.state.v_yy).epsilon(1e-9));
        CHECK(std::abs(f.moments.variance(0, 1) / (n / 4.0) - s.state.v_xy) < 1e-9);
        CHECK(f.moments.mean.z() / (n / 2.0) == doctest::Approx(s.state.j).epsilon(1e-9));
        CHECK(f.xi2 == doctest::Approx(s.xi2).epsilon(1e-9));
        if (f.tau > 0.1) CHECK(f.alpha == doctest::Approx(s.alpha).epsilon(1e-7));
        CHECK(f.rate == doctest::Approx(s.rate).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("full engine conserves the scaled transverse determinant without control") {
  const int n = 100000000;
  const Trajectory tr = integrate_full(coherent_moments(n, {0.6, 0.3}),
                                       TwistingTensor::from_components({1.0, 0.1, 0.6, 0.2, -0.1, 0.05}), n,
                                       NoControl{}, opts(2.0, 1e-3, 100));
  for (const auto& r : tr) {
    const auto [e1, e2] = transverse_frame(r.moments.mean);
    const double a = e1.dot(r.moments.variance * e1), b = e2.dot(r.moments.variance * e2),
                 c = e1.dot(r.moments.variance * e2);
    CHECK((a * b - c * c) / (double(n) * n / 16.0) == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("pole lock frequency") {
  const int n = 400;
  const PoleLockResult tact = pole_lock_frequency(pole_state(n), TwistingTensor::diagonal(1, 0, 0.5));
  CHECK(tact.omega.norm() < 1e-12);
  CHECK(tact.near_pole);

  const PoleLockResult gen = pole_lock_frequency(pole_state(n), TwistingTensor::diagonal(1, 0, 0.8));
  CHECK(gen.omega.z() == doctest::Approx(-0.3 * n));
  CHECK(std::hypot(gen.omega.x(), gen.omega.y()) < 1e-12);

  const PoleLockResult off = pole_lock_frequency(coherent_moments(n, {pi / 2, pi / 4}), TwistingTensor::diagonal(1, 0, 0.8));
  CHECK_FALSE(off.near_pole);

  MomentState zero;
  CHECK_THROWS_AS(pole_lock_frequency(zero, TwistingTensor::diagonal(1, 0, 0.8)), NumericError);
}

TEST_CASE("pole lock compensates the drift of the mean spin") {
  std::mt19937_64 rng(14);
  const int n = 1000;
  const TwistingTensor t(twist::test::random_symmetric(rng), Vec3::Zero());
  MomentState m = coherent_moments(n, {0.5, 1.0});
  m.variance(0, 1) += 30.0;
  m.variance(1, 0) += 30.0;
  const PoleLockResult lock = pole_lock_frequency(m, t);
  const MomentDerivatives d = moment_derivatives(m, t.with_omega(lock.omega));
  CHECK(d.d_mean.cross(m.mean.normalized()).norm() < 1e-9 * n * n);
}

}  // TEST_SUITE
