#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "levyenv/config.hpp"

namespace levyenv::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kParameterError = 2,
  kExperimentFailed = 3,
  kReplicationAborted = 4,
};

/**
 * Entry point of the `levyenv` tool; args excludes the program name.
 *
 *   levyenv <subcommand> [--config FILE] [--key value ...]
 *
 * Subcommands: sample-env, find-valley, simulate, local-time, limit-sample,
 * verify <experiment_id>, selftest. Outputs go to output_dir; diagnostics go
 * to `err` as `level=.. msg=".."` lines.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs the built-in example suite under the given config (mutation and
/// seed are honoured). Logs one line per check; stops at the first failure.
bool selftest(const RunConfig& config, std::ostream& err);

/// `level=<level> msg="<msg>"` with quotes and backslashes escaped.
void log_line(std::ostream& err, const std::string& level, const std::string& msg);

}  // namespace levyenv::cli
