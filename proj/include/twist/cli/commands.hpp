#pragma once

#include "twist/cli/config.hpp"

#include <iosfwd>
#include <string>
#include <utility>

namespace twist::cli {

/// CSV text for each command; the config must come from resolve_config.
std::string evolve_csv(const RunConfig& cfg);
std::string compare_csv(const RunConfig& cfg);
/// Energy grid and rate grid.
std::pair<std::string, std::string> landscape_csv(const RunConfig& cfg);
std::string husimi_csv(const RunConfig& cfg);
std::string device_json(const RunConfig& cfg);

/// Paths written by the landscape command for an --out value.
std::pair<std::string, std::string> landscape_paths(const std::string& out);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twist::cli
