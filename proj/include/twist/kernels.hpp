#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference that runs the same per-cell arithmetic, so the two agree bit for
// bit; tests check that and bench/ times them against each other.

#include "twist/band_matrix.hpp"
#include "twist/bloch_grid.hpp"
#include "twist/types.hpp"

namespace twist::kernels {

/// out = A * in.
void band_apply(const BandMatrix& a, const CVector& in, CVector& out);
void band_apply_serial(const BandMatrix& a, const CVector& in, CVector& out);

/// Husimi density ((N+1)/4pi) |<theta,phi|psi>|^2 on every grid cell.
void husimi_grid(const SpinState& state, const GridSpec& grid, std::vector<double>& out);
void husimi_grid_serial(const SpinState& state, const GridSpec& grid, std::vector<double>& out);

/// Coherent-state energy <H> and optimal squeezing rate Q on every cell.
void landscape_grid(const TwistingTensor& t, int n_particles, const GridSpec& grid,
                    std::vector<double>& energy, std::vector<double>& rate);
void landscape_grid_serial(const TwistingTensor& t, int n_particles, const GridSpec& grid,
                           std::vector<double>& energy, std::vector<double>& rate);

/// Worker threads available to the parallel kernels (1 without OpenMP).
int max_threads();

}  // namespace twist::kernels
