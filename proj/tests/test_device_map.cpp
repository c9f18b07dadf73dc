#include "test_util.hpp"
#include "twist/device_map.hpp"
#include "twist/exact_engine.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace twist;
using std::numbers::pi;
using twist::test::max_abs;

namespace {

bool tensor_equal(const TwistingTensor& a, const TwistingTensor& b, double tol) {
  return (a.chi_matrix() - b.chi_matrix()).cwiseAbs().maxCoeff() < tol &&
         (a.omega() - b.omega()).cwiseAbs().maxCoeff() < tol;
}

// Kerr Hamiltonian sum_i g_i n_i (n_i - 1) / dt built from two bosonic modes
// in a truncated Fock space, restricted to n_a + n_b = N and ordered like the
// Dicke basis (index k <-> n_a = N - k).
CMatrix fock_kerr_hamiltonian(const KerrStage& s) {
  const int n = s.n_particles;
  const int cut = n + 1;
  const int dim = cut * cut;
  CMatrix a = CMatrix::Zero(dim, dim), b = CMatrix::Zero(dim, dim);
  auto idx = [cut](int na, int nb) { return na * cut + nb; };
  for (int na = 0; na < cut; ++na)
    for (int nb = 0; nb < cut; ++nb) {
      if (na > 0) a(idx(na - 1, nb), idx(na, nb)) = std::sqrt(double(na));
      if (nb > 0) b(idx(na, nb - 1), idx(na, nb)) = std::sqrt(double(nb));
    }
  const CMatrix c = (a + b) / std::sqrt(2.0);
  const CMatrix d = (a - b) / std::sqrt(2.0);
  const CMatrix id = CMatrix::Identity(dim, dim);
  auto kerr = [&](const CMatrix& m) {
    const CMatrix num = m.adjoint() * m;
    return CMatrix(num * (num - id));
  };
  const CMatrix h = (s.gamma_a * kerr(a) + s.gamma_b * kerr(b) + s.gamma_c * kerr(c) + s.gamma_d * kerr(d)) /
                    s.roundtrip_dt;
  CMatrix out(n + 1, n + 1);
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) out(k, l) = h(idx(n - k, k), idx(n - l, l));
  return out;
}

}  // namespace

TEST_SUITE("device_map") {

TEST_CASE("interferometer mapping examples") {
  const double gz = 0.3, gx = 0.45;
  CHECK(tensor_equal(interferometer_to_tensor({gz, gz, gx, gx, 1.0, 7}), TwistingTensor::diagonal(2 * gx, 0, 2 * gz),
                     1e-15));
  const TwistingTensor lin = interferometer_to_tensor({0.2, 0, 0, 0, 1.0, 11});
  CHECK(lin.chi(2, 2) == doctest::Approx(0.2));
  CHECK(lin.omega().z() == doctest::Approx(2.0));
  CHECK(lin.omega().x() == 0.0);
  CHECK(canonicalize_tensor(interferometer_to_tensor({0.25, 0.25, 0.5, 0.5, 1.0, 10})).kind ==
        TwistClass::TwoAxisCounter);
  CHECK(canonicalize_tensor(interferometer_to_tensor({0.5, 0.5, 0.25, 0.25, 1.0, 10})).kind ==
        TwistClass::TwoAxisCounter);
  CHECK(interferometer_to_tensor({1, 0, 0, 0, 0.5, 3}).chi(2, 2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(interferometer_to_tensor({1, 1, 1, 1, 0.0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(interferometer_to_tensor({1, 1, 1, 1, -1.0, 3}), std::invalid_argument);
}

TEST_CASE("equal Kerr strengths in all arms give a one-axis tensor about y") {
  const TwistingTensor t = interferometer_to_tensor({0.25, 0.25, 0.25, 0.25, 1.0, 10});
  CHECK(tensor_equal(t, TwistingTensor::diagonal(0.5, 0, 0.5), 1e-15));
  const CanonicalTensor c = canonicalize_tensor(t);
  CHECK(c.kind == TwistClass::OneAxis);
  CHECK(c.chi_y == doctest::Approx(0.0));
  CHECK(std::abs(c.frame.row(1).dot(Vec3::UnitY())) == doctest::Approx(1.0));
}

TEST_CASE("tensor Hamiltonian matches the bosonic Kerr Hamiltonian") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 2, 5, 12, 20}) {
    const KerrStage s{u(rng), u(rng), u(rng), u(rng), 0.5 + 0.5 * (u(rng) + 1.0), n};
    const CMatrix fock = fock_kerr_hamiltonian(s);
    const CMatrix spin = build_hamiltonian(interferometer_to_tensor(s), angular_momentum_matrices(n));
    // They differ by the N-only constant that the mapping drops.
    const Complex shift = (fock - spin).trace() / double(n + 1);
    CHECK(max_abs(fock - spin - shift * CMatrix::Identity(n + 1, n + 1)) < 1e-12);
  }
}

TEST_CASE("chaining stages") {
  const KerrStage oat{0.3, 0.3, 0.0, 0.0, 1.0, 5};
  CHECK(tensor_equal(chain_stages({{oat, Mat3::Identity()}}), interferometer_to_tensor(oat), 0.0 + 1e-15));

  const Mat3 ry = rotation_about_axis(Vec3::UnitY(), pi / 2);
  const TwistingTensor two = chain_stages({{oat, Mat3::Identity()}, {oat, ry}});
  CHECK(two.chi(0, 0) == doctest::Approx(0.6));
  CHECK(two.chi(2, 2) == doctest::Approx(0.6));
  CHECK(std::abs(two.chi(1, 1)) < 1e-15);
  CHECK(std::abs(two.chi(0, 2)) < 1e-15);

  std::mt19937_64 rng(22);
  const std::vector<ChainedStage> chain{
      {{0.2, 0.1, 0.4, 0.0, 1.0, 8}, twist::test::random_rotation(rng)},
      {{0.0, 0.3, 0.1, 0.2, 1.0, 8}, twist::test::random_rotation(rng)},
      {{0.5, 0.0, 0.0, 0.3, 1.0, 8}, twist::test::random_rotation(rng)}};
  const TwistingTensor t = chain_stages(chain);
  CHECK(std::abs(t.chi(0, 1)) > 1e-3);
  Mat3 sum = Mat3::Zero();
  Vec3 omega = Vec3::Zero();
  for (const auto& c : chain) {
    const TwistingTensor s = interferometer_to_tensor(c.stage);
    sum += c.rotation * s.chi_matrix() * c.rotation.transpose();
    omega += c.rotation * s.omega();
  }
  CHECK((t.omega() - omega).norm() < 1e-13);
  const Eigen::SelfAdjointEigenSolver<Mat3> es(sum);
  const CanonicalTensor canon = canonicalize_tensor(t);
  const auto asc = canon.ascending();
  for (int k = 0; k < 3; ++k) CHECK(asc[k] == doctest::Approx(es.eigenvalues()[k]).epsilon(1e-12));

  CHECK_THROWS_AS(chain_stages({}), std::invalid_argument);
  Mat3 reflect = Mat3::Identity();
  reflect(0, 0) = -1;
  CHECK_THROWS(chain_stages({{oat, reflect}}));
}

TEST_CASE("LMG mapping") {
  const TwistingTensor t = lmg_to_tensor({1.0, 0.5, 0.25});
  CHECK(tensor_equal(t, TwistingTensor::diagonal(0.75, 0.25, 0.0, Vec3(0, 0, 1)), 1e-15));
  CHECK(canonicalize_tensor(t).kind == TwistClass::General);
  CHECK(canonicalize_tensor(lmg_to_tensor({0.0, 0.0, 0.5})).kind == TwistClass::TwoAxisCounter);
  CHECK(canonicalize_tensor(lmg_to_tensor({0.3, 0.4, 0.0})).kind == TwistClass::OneAxis);
  CHECK(canonicalize_tensor(lmg_to_tensor({0.3, 0.0, 0.0})).kind == TwistClass::Free);
}

}  // TEST_SUITE
