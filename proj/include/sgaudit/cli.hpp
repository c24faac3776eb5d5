#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace sgaudit {

inline constexpr const char* kToolName = "sgaudit";
inline constexpr const char* kToolVersion = "0.1.0";

struct CliOptions {
  // Empty: fall back to the config's "out" field, then the working directory.
  std::string out_dir;
  bool svg = false;
  bool strict = false;
  std::uint64_t seed = 12345;
};

struct CliResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;  // paths written
  nlohmann::json report;               // contents of the report JSON
};

const std::vector<std::string>& command_names();

// Dispatches one command.  Exit code 0 on success, 1 when --strict and an
// asserted-class bound (sqrt_n, thm22, in-regime quasi_sectorial) was
// violated.  Config errors throw; the caller maps them to exit 2.
CliResult run_command(const std::string& command, const nlohmann::json& config,
                      const CliOptions& opt);

// {"error": <class token>, "message": ...} for stderr.
nlohmann::json error_json(const std::exception& e);

}  // namespace sgaudit
