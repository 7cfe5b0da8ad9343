#pragma once

#include "mudecay/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mudecay {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitConfig = 2, kExitConvergence = 3 };

struct CliOptions {
  std::string command;
  std::string config_path;  // empty: built-in defaults
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;  // overrides [run] seed
  int threads = 1;
};

struct RunManifest {
  std::string config_digest;
  std::string command;
  std::string timestamp;  // UTC, ISO 8601
  std::string tool_version = kToolVersion;
  std::vector<std::string> outputs;
};

const std::vector<std::string>& cli_commands();

// Runs one command, writes <command>.json, CSV tables and run_manifest.json into
// out_dir and returns the exit code. Diagnostics go to `log`.
int run(const CliOptions& options, std::ostream& log);

}  // namespace mudecay
