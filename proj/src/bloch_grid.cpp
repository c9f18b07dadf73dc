#include "twist/bloch_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twist {

double GridSpec::theta(int i) const { return std::numbers::pi * i / (n_theta - 1); }

double GridSpec::phi(int k) const { return 2.0 * std::numbers::pi * k / n_phi; }

void GridSpec::validate() const {
  if (n_theta < 2 || n_phi < 2) throw std::invalid_argument("grid must be at least 2x2");
}

double integrate_sphere(const BlochGrid& grid) {
  const GridSpec& g = grid.spec;
  const double d_theta = std::numbers::pi / (g.n_theta - 1);
  const double d_phi = 2.0 * std::numbers::pi / g.n_phi;
  double total = 0.0;
  for (int i = 0; i < g.n_theta; ++i) {
    double ring = 0.0;
    for (int k = 0; k < g.n_phi; ++k) ring += grid.at(i, k);
    const double w = (i == 0 || i == g.n_theta - 1) ? 0.5 : 1.0;
    total += w * std::sin(g.theta(i)) * ring;
  }
  return total * d_theta * d_phi;
}

}  // namespace twist
