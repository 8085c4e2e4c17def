#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ergolab/cli/config.hpp"
#include "ergolab/cli/report.hpp"
#include "ergolab/cli/runner.hpp"

using namespace ergolab;
using namespace ergolab::cli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(name = minimal
space.kind = circle
flow.kind = rotation
function.kind = sawtooth
function.dim = 2
filtration.direction = decreasing
filtration.max_level = 3
t_grid = 1, 2, 4, 8
s_grid = 0, 1, 2, 3
checks =
seed = 5
)";

std::string with(const std::string& base, const std::string& extra) { return base + extra + "\n"; }

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  const auto at = text.find(key + " =");
  if (at == std::string::npos) return text + line + "\n";
  const auto end = text.find('\n', at);
  return text.replace(at, end - at, line);
}

ConfigError parse_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a ConfigError";
  return ConfigError("", 0, "none");
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ergolab_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const CheckRecord& only(const RunReport& report) {
  EXPECT_EQ(report.records.size(), 1u);
  return report.records.at(0);
}

std::size_t lines_of(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST(ParseConfig, MinimalConfig) {
  const auto c = parse_config_text(kMinimal);
  EXPECT_EQ(c.name, "minimal");
  EXPECT_EQ(c.space.kind, "circle");
  EXPECT_EQ(c.flow.kind, "rotation");
  EXPECT_EQ(c.function.kind, "sawtooth");
  EXPECT_EQ(c.max_level, 3);
  EXPECT_EQ(c.t_grid.values, (std::vector<double>{1, 2, 4, 8}));
  EXPECT_EQ(c.s_grid.values.size(), 4u);
  EXPECT_TRUE(c.checks.empty());
  EXPECT_EQ(c.seed, 5u);
}

TEST(ParseConfig, RejectsSmallExponent) {
  const auto e = parse_error(with(kMinimal, "p = 0.5"));
  EXPECT_EQ(e.key(), "p");
  EXPECT_NE(std::string(e.what()).find("p > 1"), std::string::npos);
}

TEST(ParseConfig, GeometricGrid) {
  auto text = replace_line(kMinimal, "t_grid", "t_grid.start = 1\nt_grid.ratio = 2\nt_grid.count = 6");
  const auto c = parse_config_text(text);
  EXPECT_EQ(c.t_grid.values, (std::vector<double>{1, 2, 4, 8, 16, 32}));
  ASSERT_TRUE(c.t_grid.geometric.has_value());
  EXPECT_EQ(expand(*c.t_grid.geometric), c.t_grid.values);
  EXPECT_EQ(expand({3.0, 0.5, 3}), (std::vector<double>{3.0, 1.5, 0.75}));
}

TEST(ParseConfig, StructuredErrors) {
  auto e = parse_error(with(kMinimal, "flow.angle = 0.3"));
  EXPECT_EQ(e.key(), "flow.angle");
  EXPECT_EQ(e.line(), 12u);

  e = parse_error(with(kMinimal, "seed = 6"));
  EXPECT_EQ(e.key(), "seed");

  // a key that only makes sense for another flow kind
  e = parse_error(with(kMinimal, "flow.h = 0.5"));
  EXPECT_EQ(e.key(), "flow.h");

  e = parse_error(replace_line(kMinimal, "filtration.max_level", "filtration.max_level = three"));
  EXPECT_EQ(e.key(), "filtration.max_level");

  e = parse_error(replace_line(kMinimal, "name", "# no name"));
  EXPECT_EQ(e.key(), "name");

  e = parse_error(replace_line(kMinimal, "checks", "checks = decomposition, no_such_check"));
  EXPECT_EQ(e.key(), "checks");

  e = parse_error(replace_line(kMinimal, "s_grid", "s_grid ="));
  EXPECT_EQ(e.key(), "s_grid");

  e = parse_error(with(kMinimal, "this line has no equals sign"));
  EXPECT_EQ(e.line(), 12u);
}

TEST(ParseConfig, EchoRoundTrip) {
  for (const auto& entry : fs::directory_iterator(ERGOLAB_SCENARIO_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    const auto c = parse_config(entry.path());
    const auto text = echo(c);
    EXPECT_EQ(parse_config_text(text), c) << entry.path();
    EXPECT_EQ(echo(parse_config_text(text)), text) << entry.path();
  }
  EXPECT_EQ(parse_config_text(echo(parse_config_text(kMinimal))), parse_config_text(kMinimal));
}

TEST(ParseConfig, FormatReal) {
  EXPECT_EQ(format_real(8.0), "8.0");
  EXPECT_EQ(format_real(0.01342), "0.01342");
  EXPECT_EQ(format_real(-3.0), "-3.0");
  EXPECT_EQ(format_real(0.1), "0.1");
  for (double v : {1.0 / 3.0, 1e-300, 6.02e23, -2.5e-7}) EXPECT_EQ(std::stod(format_real(v)), v);
}

TEST(RunScenario, EmptyChecks) {
  const auto report = run_scenario(parse_config_text(kMinimal));
  EXPECT_TRUE(report.records.empty());
  EXPECT_FALSE(report.failed());
  EXPECT_EQ(report.tool_version, kToolVersion);
  EXPECT_EQ(parse_config_text(report.config_echo), parse_config_text(kMinimal));
}

TEST(RunScenario, DecompositionOnGolden) {
  auto c = parse_config(fs::path(ERGOLAB_SCENARIO_DIR) / "golden.cfg");
  c.checks = {"decomposition"};
  const auto& r = only(run_scenario(c));
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_LE(r.value, 1e-9);
  EXPECT_EQ(r.rows.size(), c.t_grid.values.size());
}

TEST(RunScenario, DominantIneqNeedsDecreasingFiltration) {
  auto text = replace_line(kMinimal, "filtration.direction", "filtration.direction = increasing");
  text = replace_line(text, "checks", "checks = dominant_ineq_me");
  const auto& r = only(run_scenario(parse_config_text(text)));
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_NE(r.message.find("decreasing"), std::string::npos) << r.message;
}

TEST(RunScenario, ModuleRejectionsBecomeRecords) {
  // no grid time reaches 1, so the decomposition has nothing to check
  auto text = replace_line(kMinimal, "t_grid", "t_grid = 0.25, 0.5");
  text = replace_line(text, "checks", "checks = decomposition, ergodic_envelope");
  text = replace_line(text, "flow.kind", "flow.kind = identity");
  const auto report = run_scenario(parse_config_text(text));
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_EQ(report.records[0].name, "decomposition");
  EXPECT_EQ(report.records[0].status, Status::fail);
  EXPECT_EQ(report.records[1].status, Status::fail);
  EXPECT_TRUE(report.failed());
}

TEST(RunScenario, ChecksRunInDeclarationOrder) {
  const auto text = replace_line(kMinimal, "checks", "checks = maximal_ineq_me, limits, decomposition");
  const auto report = run_scenario(parse_config_text(text));
  ASSERT_EQ(report.records.size(), 3u);
  EXPECT_EQ(report.records[0].name, "maximal_ineq_me");
  EXPECT_EQ(report.records[1].name, "limits");
  EXPECT_EQ(report.records[2].name, "decomposition");
  for (const auto& r : report.records) EXPECT_FALSE(r.wall_time.has_value());
  const auto timed = run_scenario(parse_config_text(text), RunOptions{true});
  for (const auto& r : timed.records) EXPECT_TRUE(r.wall_time.has_value());
}

TEST(WriteCsv, Format) {
  RunReport report;
  report.scenario = "golden";
  CheckRecord r;
  r.name = "me_convergence";
  r.rows.push_back({8.0, 3.0, "sup_error", 0.01342});
  r.rows.push_back({std::nullopt, std::nullopt, "constant", 2.0});
  report.records.push_back(r);
  const auto dir = fresh_dir("csv");
  fs::create_directories(dir);
  const auto text = slurp(write_csv(report, dir));
  EXPECT_EQ(text,
            "scenario,check,t,s,metric,value\n"
            "golden,me_convergence,8.0,3.0,sup_error,0.01342\n"
            "golden,me_convergence,,,constant,2.0\n");
  EXPECT_EQ(text.find('\r'), std::string::npos);

  const auto empty = fresh_dir("csv_empty");
  fs::create_directories(empty);
  EXPECT_EQ(slurp(write_csv(RunReport{}, empty)), "scenario,check,t,s,metric,value\n");

  EXPECT_THROW(write_csv(report, dir / "missing" / "deeper"), std::runtime_error);
}

TEST(EmitPlotData, FileCounts) {
  auto c = parse_config(fs::path(ERGOLAB_SCENARIO_DIR) / "golden.cfg");
  c.checks = {"me_convergence", "dominant_ineq_me", "diagonal"};
  auto report = run_scenario(c);
  ASSERT_EQ(report.records.size(), 3u);
  EXPECT_EQ(report.records[0].plots.size(), 2u);
  EXPECT_EQ(report.records[1].plots.size(), 0u);
  ASSERT_EQ(report.records[2].plots.size(), 1u);
  EXPECT_EQ(report.records[2].plots[0].columns, (std::vector<std::string>{"t", "joint", "iterated"}));

  const auto dir = fresh_dir("plots");
  fs::create_directories(dir);
  const auto paths = emit_plot_data(report, dir);
  ASSERT_EQ(paths.size(), 3u);
  std::istringstream diag(slurp(paths[2]));
  std::string header, row;
  std::getline(diag, header);
  EXPECT_EQ(header, "# t joint iterated");
  while (std::getline(diag, row)) {
    std::istringstream fields(row);
    std::string field;
    int n = 0;
    while (fields >> field) ++n;
    EXPECT_EQ(n, 3) << row;
  }
}

TEST(WriteArtifacts, CsvRowOrderAndJson) {
  auto c = parse_config(fs::path(ERGOLAB_SCENARIO_DIR) / "golden.cfg");
  c.checks = {"me_convergence", "decomposition"};
  auto report = run_scenario(c);
  const auto dir = fresh_dir("artifacts");
  write_artifacts(report, dir);
  for (const auto& name : report.artifacts) EXPECT_TRUE(fs::exists(dir / name)) << name;
  EXPECT_EQ(report.artifacts.front(), "results.csv");
  EXPECT_EQ(report.artifacts.back(), "report.json");

  // check order, then t-major
  std::istringstream csv(slurp(dir / "results.csv"));
  std::string line;
  std::getline(csv, line);
  std::string last_check;
  double last_t = -1.0;
  bool seen_decomposition = false;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string scenario, check, t;
    std::getline(fields, scenario, ',');
    std::getline(fields, check, ',');
    std::getline(fields, t, ',');
    EXPECT_EQ(scenario, "golden");
    if (check != last_check) {
      last_t = -1.0;
      if (check == "decomposition") seen_decomposition = true;
      EXPECT_FALSE(check == "me_convergence" && seen_decomposition);
    }
    if (!t.empty()) {
      EXPECT_GE(std::stod(t), last_t) << line;
      last_t = std::stod(t);
    }
    last_check = check;
  }
  const auto json = slurp(dir / "report.json");
  EXPECT_NE(json.find("\"tool_version\": \"0.1.0\""), std::string::npos);
  EXPECT_NE(json.find("\"name\": \"decomposition\""), std::string::npos);
  EXPECT_EQ(json.find("wall_time"), std::string::npos);
}

TEST(WriteArtifacts, Deterministic) {
  auto c = parse_config(fs::path(ERGOLAB_SCENARIO_DIR) / "random_circle.cfg");
  auto a = run_scenario(c);
  auto b = run_scenario(parse_config_text(a.config_echo));
  const auto da = fresh_dir("det_a");
  const auto db = fresh_dir("det_b");
  write_artifacts(a, da);
  write_artifacts(b, db);
  ASSERT_EQ(a.artifacts, b.artifacts);
  for (const auto& name : a.artifacts) EXPECT_EQ(slurp(da / name), slurp(db / name)) << name;
}

TEST(Tool, ExitCodes) {
  const std::string tool = ERGOLAB_TOOL_PATH;
  const auto dir = fresh_dir("tool");
  fs::create_directories(dir);
  const auto run = [&](const std::string& cfg_text, const std::string& extra = "") {
    const auto cfg = dir / "scenario.cfg";
    std::ofstream(cfg) << cfg_text;
    const std::string cmd = tool + " run --config " + cfg.string() + " --out " + (dir / "out").string() + extra +
                            " > " + (dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(run(kMinimal), 0);
  EXPECT_EQ(slurp(dir / "out" / "results.csv"), "scenario,check,t,s,metric,value\n");
  auto failing = replace_line(kMinimal, "filtration.direction", "filtration.direction = increasing");
  failing = replace_line(failing, "checks", "checks = dominant_ineq_me");
  EXPECT_EQ(run(failing), 1);
  EXPECT_EQ(run(with(kMinimal, "bogus = 1")), 2);
  EXPECT_NE(slurp(dir / "log.txt").find("bogus"), std::string::npos);
  EXPECT_EQ(run(kMinimal, " --seed 9"), 0);
  EXPECT_NE(slurp(dir / "out" / "report.json").find("seed = 9"), std::string::npos);
}
