#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "app/config.hpp"

namespace cbcount::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitInput = 2,
  kExitTolerance = 3,
  kExitInternal = 4,
};

struct RunOptions {
  unsigned threads = 1;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json report;  // always carries engine version, config hash, status
  std::string csv;                // empty when the command has no tabular output
};

const std::vector<std::string>& subcommands();

/// Executes one subcommand. Never throws: failures become exit codes plus an
/// "error" record { kind, message } in the report.
RunResult run(const std::string& command, const RunConfig& cfg, const RunOptions& options = {});

/// Formats a double at 12 significant digits ("%.12g").
std::string format_double(double v);

/// Writes report/CSV to the config's output paths (if set). Returns the
/// machine-readable one-line summary printed on stdout.
std::string write_artifacts(const RunResult& result, const RunConfig& cfg, const std::string& command);

}  // namespace cbcount::app
