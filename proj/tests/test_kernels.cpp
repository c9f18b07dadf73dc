#include "test_util.hpp"
#include "twist/analytic.hpp"
#include "twist/exact_engine.hpp"
#include "twist/kernels.hpp"

#include <doctest.h>

#include <cstring>
#include <random>

using namespace twist;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

SpinState random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SpinState s{n, CVector(n + 1)};
  for (int i = 0; i <= n; ++i) s.amplitudes[i] = Complex(g(rng), g(rng));
  s.amplitudes.normalize();
  return s;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("band product matches the dense product") {
  std::mt19937_64 rng(31);
  const auto ops = angular_momentum_matrices(40);
  const TwistingTensor t(twist::test::random_symmetric(rng), Vec3(0.1, 0.2, 0.3));
  const BandMatrix h = build_hamiltonian_band(t, ops);
  const SpinState s = random_state(40, 32);
  CVector out;
  kernels::band_apply(h, s.amplitudes, out);
  CHECK((out - h.to_dense() * s.amplitudes).norm() < 1e-12);
}

TEST_CASE("parallel kernels agree with their serial references bit for bit") {
  CHECK(kernels::max_threads() >= 1);
  std::mt19937_64 rng(33);
  const int n = 3000;
  const auto ops = angular_momentum_matrices(n);
  const TwistingTensor t(twist::test::random_symmetric(rng), Vec3(0.4, 0.0, -0.1));
  const SpinState s = random_state(n, 34);

  CVector par, ser;
  kernels::band_apply(build_hamiltonian_band(t, ops), s.amplitudes, par);
  kernels::band_apply_serial(build_hamiltonian_band(t, ops), s.amplitudes, ser);
  CHECK(std::memcmp(par.data(), ser.data(), sizeof(Complex) * par.size()) == 0);

  const GridSpec grid{61, 120};
  std::vector<double> hp, hs;
  kernels::husimi_grid(s, grid, hp);
  kernels::husimi_grid_serial(s, grid, hs);
  CHECK(bitwise_equal(hp, hs));

  std::vector<double> ep, rp, es, rs;
  kernels::landscape_grid(t, n, grid, ep, rp);
  kernels::landscape_grid_serial(t, n, grid, es, rs);
  CHECK(bitwise_equal(ep, es));
  CHECK(bitwise_equal(rp, rs));
}

TEST_CASE("landscape energy matches the closed-form coherent energy") {
  std::mt19937_64 rng(35);
  const TwistingTensor t(twist::test::random_symmetric(rng), Vec3(0.2, -0.3, 0.1));
  const GridSpec grid{19, 36};
  std::vector<double> e, r;
  kernels::landscape_grid_serial(t, 50, grid, e, r);
  for (int i = 0; i < grid.n_theta; ++i)
    for (int k = 0; k < grid.n_phi; ++k) {
      const BlochDirection d{grid.theta(i), grid.phi(k)};
      const double ref = mean_energy(t, coherent_moments(50, d));
      CHECK(e[i * grid.n_phi + k] == doctest::Approx(ref).epsilon(1e-12));
      CHECK(r[i * grid.n_phi + k] >= 0.0);
    }
}

}  // TEST_SUITE
