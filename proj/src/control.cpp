#include "twist/control.hpp"

#include "twist/gaussian_engine.hpp"
#include "twist/spin_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace twist {

const char* control_name(const ControlLaw& c) {
  if (std::holds_alternative<NoControl>(c)) return "none";
  if (std::holds_alternative<FixedRotation>(c)) return "fixed";
  return "pole-lock";
}

namespace {

// Sine of the angle between dir and the closest eigenspace of chi.
double off_axis_angle(const TwistingTensor& t, const Vec3& dir) {
  const CanonicalTensor canon = canonicalize_tensor(t);
  const std::array<double, 3> eig{canon.chi_x, canon.chi_y, canon.chi_z};
  const double spread = canon.chi_x - canon.chi_y;
  if (canon.kind == TwistClass::Free) return 0.0;
  double best = 0.0;
  for (int a = 0; a < 3; ++a) {
    double proj2 = 0.0;
    for (int b = 0; b < 3; ++b) {
      if (std::abs(eig[a] - eig[b]) > 1e-9 * spread) continue;
      const double c = canon.frame.row(b).dot(dir);
      proj2 += c * c;
    }
    best = std::max(best, proj2);
  }
  return std::sqrt(std::max(0.0, 1.0 - best));
}

}  // namespace

PoleLockResult pole_lock_frequency(const MomentState& m, const TwistingTensor& t,
                                   const PoleLock& opts) {
  const double length = m.mean.norm();
  if (!(length > 0.0) || !std::isfinite(length))
    throw NumericError("pole lock undefined: mean spin vanishes");

  PoleLockResult out;
  const Vec3 dir = m.mean / length;
  if (opts.optimal_rotation) {
    const PoleFrame f = pole_frame(t, dir);
    out.omega += 2.0 * length * (0.5 * (f.chi_x + f.chi_y) - f.chi_z) * dir;
  }
  if (opts.compensate_backreaction) {
    const Vec3 drift = moment_derivatives(m, t.with_omega(Vec3::Zero())).d_mean;
    out.omega += drift.cross(m.mean) / (length * length);
  }
  out.off_axis = off_axis_angle(t, dir);
  out.near_pole = out.off_axis < 0.1;
  return out;
}

Vec3 control_omega(const ControlLaw& c, const MomentState& m, const TwistingTensor& t) {
  if (const auto* fixed = std::get_if<FixedRotation>(&c)) return fixed->omega;
  if (const auto* lock = std::get_if<PoleLock>(&c)) return pole_lock_frequency(m, t, *lock).omega;
  return t.omega();
}

}  // namespace twist
