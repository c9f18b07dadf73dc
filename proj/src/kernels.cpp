#include "twist/kernels.hpp"

#include "twist/analytic.hpp"
#include "twist/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace twist::kernels {

namespace {

// Below this dimension the fork/join cost outweighs the mat-vec.
constexpr int kParallelBandDim = 2048;

struct BandView {
  const Complex* d[2 * BandMatrix::kHalfWidth + 1];
  int dim;

  explicit BandView(const BandMatrix& a) : dim(a.dim()) {
    for (int off = -BandMatrix::kHalfWidth; off <= BandMatrix::kHalfWidth; ++off)
      d[off + BandMatrix::kHalfWidth] = a.diagonal(off);
  }
};

inline Complex band_row(const BandView& a, const Complex* in, int i) {
  Complex acc{};
  const int lo = std::max(-BandMatrix::kHalfWidth, -i);
  const int hi = std::min(BandMatrix::kHalfWidth, a.dim - 1 - i);
  for (int off = lo; off <= hi; ++off) {
    const Complex x = a.d[off + BandMatrix::kHalfWidth][i];
    const Complex y = in[i + off];
    acc += Complex(x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real());
  }
  return acc;
}

// Real coherent-state weights along one theta ring, normalized to unit sum of squares.
std::vector<double> ring_weights(int n, double theta) {
  const double c = std::abs(std::cos(0.5 * theta));
  const double s = std::abs(std::sin(0.5 * theta));
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  double norm2 = 0.0;
  for (int k = 0; k <= n; ++k) {
    w[k] = coherent_weight(n, k, c, s);
    norm2 += w[k] * w[k];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : w) x *= inv;
  return w;
}

void husimi_ring(const SpinState& state, const GridSpec& grid, int i, double* row) {
  const int n = state.n_particles;
  const std::vector<double> w = ring_weights(n, grid.theta(i));
  const double prefactor = (n + 1) / (4.0 * std::numbers::pi);
  for (int k = 0; k < grid.n_phi; ++k) {
    // <theta,phi|psi> = sum_m w_m e^{-i m' phi} psi_m, evaluated by Horner in z = e^{-i phi}.
    const Complex z = std::polar(1.0, -grid.phi(k));
    Complex acc{};
    for (int m = n; m >= 0; --m) acc = acc * z + w[m] * state.amplitudes[m];
    row[k] = prefactor * std::norm(acc);
  }
}

void landscape_cell(const TwistingTensor& t, const Mat3& chi, int n, const GridSpec& grid,
                    int i, int k, double& energy, double& rate) {
  const BlochDirection dir{grid.theta(i), grid.phi(k)};
  energy = mean_energy(t, coherent_moments(n, dir));
  rate = squeezing_rate_in_frame(chi, dir, 0.5 * n).rate;
}

}  // namespace

void band_apply(const BandMatrix& a, const CVector& in, CVector& out) {
  const BandView v(a);
  const int dim = v.dim;
  out.resize(dim);
  const Complex* x = in.data();
  Complex* y = out.data();
#pragma omp parallel for schedule(static) if (dim >= kParallelBandDim)
  for (int i = 0; i < dim; ++i) y[i] = band_row(v, x, i);
}

void band_apply_serial(const BandMatrix& a, const CVector& in, CVector& out) {
  const BandView v(a);
  const int dim = v.dim;
  out.resize(dim);
  const Complex* x = in.data();
  Complex* y = out.data();
  for (int i = 0; i < dim; ++i) y[i] = band_row(v, x, i);
}

void husimi_grid(const SpinState& state, const GridSpec& grid, std::vector<double>& out) {
  grid.validate();
  out.assign(grid.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < grid.n_theta; ++i)
    husimi_ring(state, grid, i, out.data() + static_cast<std::size_t>(i) * grid.n_phi);
}

void husimi_grid_serial(const SpinState& state, const GridSpec& grid, std::vector<double>& out) {
  grid.validate();
  out.assign(grid.size(), 0.0);
  for (int i = 0; i < grid.n_theta; ++i)
    husimi_ring(state, grid, i, out.data() + static_cast<std::size_t>(i) * grid.n_phi);
}

void landscape_grid(const TwistingTensor& t, int n_particles, const GridSpec& grid,
                    std::vector<double>& energy, std::vector<double>& rate) {
  grid.validate();
  energy.assign(grid.size(), 0.0);
  rate.assign(grid.size(), 0.0);
  const Mat3 chi = t.chi_matrix();
  const int cells = static_cast<int>(grid.size());
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cells; ++c)
    landscape_cell(t, chi, n_particles, grid, c / grid.n_phi, c % grid.n_phi, energy[c], rate[c]);
}

void landscape_grid_serial(const TwistingTensor& t, int n_particles, const GridSpec& grid,
                           std::vector<double>& energy, std::vector<double>& rate) {
  grid.validate();
  energy.assign(grid.size(), 0.0);
  rate.assign(grid.size(), 0.0);
  const Mat3 chi = t.chi_matrix();
  const int cells = static_cast<int>(grid.size());
  for (int c = 0; c < cells; ++c)
    landscape_cell(t, chi, n_particles, grid, c / grid.n_phi, c % grid.n_phi, energy[c], rate[c]);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace twist::kernels
