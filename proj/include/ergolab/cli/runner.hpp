#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/cli/config.hpp"
#include "ergolab/cli/report.hpp"

namespace ergolab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
  bool timings = false;  // record per-check wall time (makes report.json run-dependent)
};

/// Runs the configured checks in order. Exceptions raised by a check become
/// FAIL records; the run itself only throws on invariant breakage.
RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// One-line descriptions for `list`.
std::string describe_check(const std::string& name);
std::vector<std::string> builtin_function_names();

struct SuiteEntry {
  std::filesystem::path config_path;
  std::string scenario;
  bool config_error = false;
  bool failed = false;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string message;
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  int exit_code() const;
};

/// Every *.cfg under `scenario_dir` in name order; `fast` keeps only those
/// tagged `fast`. Artifacts go to out_dir/<scenario>/.
SuiteResult run_suite(const std::filesystem::path& scenario_dir, const std::filesystem::path& out_dir, bool fast,
                      std::optional<std::uint64_t> seed, const RunOptions& options = {});

}  // namespace ergolab::cli
