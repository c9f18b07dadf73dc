#include "twist/device_map.hpp"

#include "twist/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace twist {

TwistingTensor interferometer_to_tensor(const KerrStage& s) {
  if (!(s.roundtrip_dt > 0.0)) throw std::invalid_argument("Kerr stage: round-trip time must be > 0");
  if (s.n_particles < 1) throw std::invalid_argument("Kerr stage: N must be >= 1");
  const double inv = 1.0 / s.roundtrip_dt;
  const double lin = (s.n_particles - 1) * inv;
  return TwistingTensor::from_components(
      {(s.gamma_c + s.gamma_d) * inv, 0.0, (s.gamma_a + s.gamma_b) * inv, 0.0, 0.0, 0.0},
      Vec3((s.gamma_c - s.gamma_d) * lin, 0.0, (s.gamma_a - s.gamma_b) * lin));
}

TwistingTensor chain_stages(const std::vector<ChainedStage>& stages) {
  if (stages.empty()) throw std::invalid_argument("chain_stages: empty chain");
  TwistingTensor total = TwistingTensor::diagonal(0.0, 0.0, 0.0);
  for (const ChainedStage& c : stages) total = total + rotate_tensor(interferometer_to_tensor(c.stage), c.rotation);
  return total;
}

TwistingTensor lmg_to_tensor(const LmgParameters& p) {
  return TwistingTensor::diagonal(p.v_param + p.w_param, p.v_param - p.w_param, 0.0,
                                  Vec3(0.0, 0.0, p.omega_big));
}

}  // namespace twist
