#pragma once

#include <exception>
#include <ostream>
#include <string>

#include "config.hpp"

namespace gravinv::cli {

enum ExitCode : int { kOk = 0, kParseError = 2, kGeometryError = 3, kNumericalError = 4 };

/// Maps a caught exception to the process exit code.
int exit_code_for(const std::exception& e);

/// Each command validates the config, writes its outputs plus the resolved
/// config (config.txt) into output_dir, and reports progress to `log`.
void cmd_forward(const RunConfig& config, std::ostream& log);
void cmd_synth(const RunConfig& config, std::ostream& log);
void cmd_invert(const RunConfig& config, std::ostream& log);
void cmd_preprocess(const RunConfig& config, std::ostream& log);

/// Runs the named command, printing any error to `err`; returns the exit code.
int run_command(const std::string& name, const RunConfig& config, std::ostream& log,
                std::ostream& err);

}  // namespace gravinv::cli
