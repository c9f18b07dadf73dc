#pragma once

#include "twist/types.hpp"

#include <cmath>
#include <random>

namespace twist::test {

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Mat3 random_symmetric(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

// exp(-i theta A) for Hermitian A via its own eigendecomposition.
inline CMatrix hermitian_exp(const CMatrix& a, double theta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  CVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, -theta * es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace twist::test
