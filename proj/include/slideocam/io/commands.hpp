#pragma once

// Command-line front end. Exit codes: 0 success, 1 configuration error,
// 2 infeasible model.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slideocam/io/config.hpp"

namespace slideocam::io {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitInfeasible = 2;

struct CliOverrides {
    std::optional<std::string> out;
    std::optional<std::size_t> resolution;
    std::optional<std::string> format;
    std::optional<std::string> material;
    std::optional<std::int64_t> seed;
};

/// Flags take precedence over file values. --resolution applies to the grid
/// or sampling density of the given command.
void apply_overrides(RunConfig& config, const CliOverrides& flags, const std::string& command);

struct CommandOutput {
    int exit_code = kExitSuccess;
    std::vector<std::filesystem::path> files;
};

CommandOutput cmd_profile(const RunConfig& config, std::ostream& out, std::ostream& err);
CommandOutput cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err);
CommandOutput cmd_sensitivity(const RunConfig& config, std::ostream& out, std::ostream& err);
CommandOutput cmd_pareto(const RunConfig& config, std::ostream& out, std::ostream& err);
CommandOutput cmd_contour(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs one command by name, mapping exceptions onto the exit-code contract.
CommandOutput run_command(const std::string& command, const RunConfig& config, std::ostream& out,
                          std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slideocam::io
