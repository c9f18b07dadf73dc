#pragma once

#include "twist/types.hpp"

#include <vector>

namespace twist {

/// Two crossed resonators mixed on a balanced beam splitter, a Kerr medium in
/// each of the four arms (a, b before the splitter, c, d after it).
struct KerrStage {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double gamma_c = 0.0;
  double gamma_d = 0.0;
  double roundtrip_dt = 1.0;
  int n_particles = 1;
};

/// Lipkin-Meshkov-Glick couplings.
struct LmgParameters {
  double omega_big = 0.0;
  double v_param = 0.0;
  double w_param = 0.0;
};

/// chi_zz = (g_a + g_b)/dt, chi_xx = (g_c + g_d)/dt,
/// omega_z = (N-1)(g_a - g_b)/dt, omega_x = (N-1)(g_c - g_d)/dt.
TwistingTensor interferometer_to_tensor(const KerrStage& stage);

struct ChainedStage {
  KerrStage stage;
  Mat3 rotation = Mat3::Identity();
};

/// Sum of the rotated per-stage tensors (first-order composition).
TwistingTensor chain_stages(const std::vector<ChainedStage>& stages);

TwistingTensor lmg_to_tensor(const LmgParameters& p);

}  // namespace twist
