#pragma once

#include "twist/bloch_grid.hpp"
#include "twist/device_map.hpp"
#include "twist/gaussian_engine.hpp"
#include "twist/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace twist::cli {

enum class Command { Evolve, Compare, Landscape, Husimi, Device };
enum class Engine { Exact, GaussianFull, GaussianScaled, Analytic };
enum class ControlMode { None, Fixed, PoleLock };

const char* to_string(Command c);
const char* to_string(Engine e);

struct RunConfig {
  Command command = Command::Evolve;
  Engine engine = Engine::GaussianScaled;
  std::optional<int> n_particles;  // empty: N -> infinity
  std::vector<int> n_list;         // compare only
  TwistingTensor tensor;
  std::string tensor_source;
  ControlMode control = ControlMode::None;
  Vec3 fixed_omega = Vec3::Zero();
  std::optional<double> omega_tilde;
  BlochDirection initial;
  IntegrationOptions integration;
  GridSpec grid{181, 360};
  std::string out;  // empty: standard output
  bool physical_time = false;

  /// +1 or -1 for a start at the north or south pole, 0 otherwise.
  int pole() const;
  ControlLaw control_law() const;
  ScaledControl scaled_control() const;
  DiagonalChi diagonal_chi() const;
};

/// Reads a JSON config file. Throws ConfigError.
nlohmann::json read_config_file(const std::string& path);

/// Overlays flag values on file values. A tensor source given by flags
/// replaces any tensor source in the file.
nlohmann::json merge_layers(nlohmann::json file, const nlohmann::json& flags);

/// Builds and fully validates the configuration for a command. Throws
/// ConfigError with a message naming the offending key.
RunConfig resolve_config(Command command, const nlohmann::json& values);

/// Parsing helpers shared with the flag front end.
double parse_number(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);

}  // namespace twist::cli
