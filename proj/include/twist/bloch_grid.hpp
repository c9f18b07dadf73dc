#pragma once

#include <vector>

namespace twist {

/// theta uniform on [0, pi] including both poles; phi uniform on [0, 2 pi).
struct GridSpec {
  int n_theta = 0;
  int n_phi = 0;

  double theta(int i) const;
  double phi(int k) const;
  std::size_t size() const { return static_cast<std::size_t>(n_theta) * n_phi; }
  void validate() const;
};

/// Scalar field sampled on a GridSpec, row-major in theta.
struct BlochGrid {
  GridSpec spec;
  std::vector<double> values;

  double at(int i, int k) const { return values[static_cast<std::size_t>(i) * spec.n_phi + k]; }
};

/// Surface integral: trapezoid in theta (with the sin theta weight),
/// rectangle rule in phi.
double integrate_sphere(const BlochGrid& grid);

}  // namespace twist
