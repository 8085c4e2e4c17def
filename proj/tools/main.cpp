#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ergolab/cli/config.hpp"
#include "ergolab/cli/runner.hpp"

#ifndef ERGOLAB_SCENARIO_DIR
#define ERGOLAB_SCENARIO_DIR "scenarios"
#endif

namespace {

using namespace ergolab::cli;

void print_report(const RunReport& report) {
  for (const auto& r : report.records) {
    std::cout << to_string(r.status) << "  " << report.scenario << "/" << r.name << "  value=" << format_real(r.value);
    if (r.bound) std::cout << "  bound=" << format_real(*r.bound);
    if (r.wall_time) std::cout << "  time=" << format_real(*r.wall_time) << "s";
    if (!r.message.empty()) std::cout << "  (" << r.message << ")";
    std::cout << '\n';
  }
}

int run_command(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed,
                bool timings) {
  ScenarioConfig config;
  try {
    config = parse_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (seed) config.seed = *seed;
  auto report = run_scenario(config, RunOptions{timings});
  try {
    write_artifacts(report, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  print_report(report);
  return report.failed() ? 1 : 0;
}

int verify_command(const std::string& suite, const std::string& scenarios, const std::string& out,
                   std::optional<std::uint64_t> seed, bool timings) {
  SuiteResult result;
  try {
    result = run_suite(scenarios, out, suite == "fast", seed, RunOptions{timings});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  for (const auto& e : result.entries) {
    if (e.config_error) {
      std::cout << "CONFIG  " << e.config_path.filename().string() << "  " << e.message << '\n';
    } else {
      std::cout << (e.failed ? "FAIL  " : "PASS  ") << e.scenario << "  checks=" << e.checks
                << "  failures=" << e.failures << '\n';
    }
  }
  std::cout << result.entries.size() << " scenarios, artifacts in " << out << '\n';
  return result.exit_code();
}

int list_command() {
  std::cout << "checks:\n";
  for (const auto& name : check_names()) std::cout << "  " << name << "  " << describe_check(name) << '\n';
  std::cout << "functions:\n";
  for (const auto& name : builtin_function_names()) std::cout << "  " << name << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: ergodic and martingale average experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one scenario config");
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool timings = false;
  run->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--timings", timings, "record wall time per check in report.json");

  auto* verify = app.add_subcommand("verify", "run the shipped scenario corpus");
  std::string suite = "all", scenarios = ERGOLAB_SCENARIO_DIR, verify_out = "verify_out";
  verify->add_option("--suite", suite, "all or fast")->check(CLI::IsMember({"all", "fast"}));
  verify->add_option("--scenarios", scenarios, "scenario directory")->check(CLI::ExistingDirectory);
  verify->add_option("--out", verify_out, "output directory");
  verify->add_option("--seed", seed, "override every config seed");
  verify->add_flag("--timings", timings, "record wall time per check in report.json");

  auto* list = app.add_subcommand("list", "print checks and builtin functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return run_command(config_path, out_dir, seed, timings);
  if (verify->parsed()) return verify_command(suite, scenarios, verify_out, seed, timings);
  if (list->parsed()) return list_command();
  return 2;
}
