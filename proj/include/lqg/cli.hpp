#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "lqg/config.hpp"
#include "lqg/error.hpp"

namespace lqg {

/// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitResolution = 4;

const std::vector<std::string>& subcommands();

/// Validates the config for the subcommand, runs it and writes its artifacts
/// under config.out. Library errors are mapped to exit statuses and reported
/// on `log`.
int run(const std::string& subcommand, const ExperimentConfig& config, std::ostream& log);

/// Same, but lets library errors propagate.
void run_or_throw(const std::string& subcommand, const ExperimentConfig& config, std::ostream& log);

int exit_status(ErrorKind kind);

}  // namespace lqg
