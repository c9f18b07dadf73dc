#pragma once

#include "twist/types.hpp"

#include <variant>

namespace twist {

/// Use the tensor's own omega.
struct NoControl {};

/// Replace the tensor's omega by a fixed rotation vector.
struct FixedRotation {
  Vec3 omega = Vec3::Zero();
};

/// Recompute omega from the current moments so the mean spin stays put and
/// the uncertainty ellipse stays at 45 degrees to the twisting axes.
struct PoleLock {
  bool optimal_rotation = true;        // omega along J from the 45-degree condition
  bool compensate_backreaction = true; // transverse omega cancelling the drift of J
};

using ControlLaw = std::variant<NoControl, FixedRotation, PoleLock>;

const char* control_name(const ControlLaw& c);

struct PoleLockResult {
  Vec3 omega = Vec3::Zero();
  /// Sine of the angle between J and the nearest eigen-axis of chi.
  double off_axis = 0.0;
  /// off_axis below 0.1, the regime the lock is meant for.
  bool near_pole = true;
};

/// Rotation vector for the pole lock at the current moments.
///
/// In the frame z = J/|J|, x/y the principal axes of the transverse block of
/// chi, the rotation about z is 2|J| ((chi_x + chi_y)/2 - chi_z), i.e.
/// N omega_tilde with omega_tilde = j ((chi_x + chi_y)/2 - chi_z). The
/// transverse part (b x J)/|J|^2 cancels the component of the twisting drift
/// b = dJ/dt|_{omega=0} perpendicular to J.
/// Throws NumericError when |J| vanishes.
PoleLockResult pole_lock_frequency(const MomentState& m, const TwistingTensor& t,
                                   const PoleLock& opts = {});

/// Rotation vector the control law applies at the given moments.
Vec3 control_omega(const ControlLaw& c, const MomentState& m, const TwistingTensor& t);

}  // namespace twist
