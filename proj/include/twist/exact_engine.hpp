#pragma once

#include "twist/band_matrix.hpp"
#include "twist/bloch_grid.hpp"
#include "twist/control.hpp"
#include "twist/spin_algebra.hpp"
#include "twist/types.hpp"

#include <functional>
#include <span>

namespace twist {

/// H = omega_k J_k + chi_kl J_k J_l (the N-only term is a global phase and is
/// dropped). Pentadiagonal in the Dicke basis.
BandMatrix build_hamiltonian_band(const TwistingTensor& t, const AngularMomentumSet& ops);
CMatrix build_hamiltonian(const TwistingTensor& t, const AngularMomentumSet& ops);

/// exp(-i H t) for a fixed Hermitian H via one eigendecomposition.
class ExactPropagator {
 public:
  explicit ExactPropagator(const CMatrix& hamiltonian);

  CVector apply(const CVector& psi, double time) const;
  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  Eigen::VectorXd energies_;
  CMatrix basis_;
};

/// psi <- exp(-i H dt) psi by a Taylor series, subdividing dt so each
/// substep has ||H dt|| <= 1/2.
void taylor_step(const BandMatrix& h, double dt, CVector& psi);

struct ExactOptions {
  /// Control step for state-dependent rotations, in scaled time.
  double control_dtau = 1e-3;
};

/// Evolve for physical time `duration`.
SpinState evolve_exact(const SpinState& state, const TwistingTensor& t, double duration,
                       const ControlLaw& control = NoControl{}, const ExactOptions& opts = {});

/// Visit the state at each scaled time in taus (ascending, >= 0); physical
/// time is tau / N.
void evolve_exact_samples(const SpinState& state, const TwistingTensor& t,
                          std::span<const double> taus, const ControlLaw& control,
                          const ExactOptions& opts,
                          const std::function<void(double tau, const SpinState&)>& visit);

MomentState moments(const SpinState& state, const AngularMomentumSet& ops);

/// Orthonormal tangent frame (e1, e2) at the mean-spin direction:
/// e1 = z x J normalized, e2 = J x e1; near the poles e1 is x projected
/// onto the tangent plane.
std::pair<Vec3, Vec3> transverse_frame(const Vec3& mean);

struct SqueezingParameter {
  double xi2 = 1.0;
  /// Minor-axis angle from e1 towards -e2, in [0, pi).
  double alpha = 0.0;
};

/// Minimum transverse variance relative to the coherent value N/4.
/// Throws NumericError when |J| < 1e-9 N/2.
SqueezingParameter squeezing_parameter(const MomentState& m, int n_particles);

/// Full record for a moment state: xi2, alpha, and the optimal rate per unit
/// scaled time for the current mean spin.
SqueezingRecord make_record(double tau, const MomentState& m, int n_particles,
                            const TwistingTensor& t);

/// Husimi function ((N+1)/4pi) |<theta,phi|psi>|^2; integrates to 1.
BlochGrid husimi(const SpinState& state, const GridSpec& grid);

}  // namespace twist
