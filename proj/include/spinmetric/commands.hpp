#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "spinmetric/config.hpp"

namespace spinmetric::commands {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3 };

// Each command writes its files into `out` and throws on failure.
void cmd_evolve(const RunConfig& config, const std::filesystem::path& out);
void cmd_sweep(const RunConfig& config, const std::filesystem::path& out, int workers);
void cmd_lattice(const RunConfig& config, const std::filesystem::path& out);
void cmd_gravity_check(const RunConfig& config, const std::filesystem::path& out);
void cmd_convergence(const RunConfig& config, const std::filesystem::path& out);

/// Dispatches `name` and maps exceptions to the exit-code contract:
/// 0 success, 2 configuration error, 3 numerical-consistency failure.
int run(const std::string& name, const RunConfig& config, int workers, std::ostream& err);

}  // namespace spinmetric::commands
