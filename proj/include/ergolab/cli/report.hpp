#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ergolab::cli {

enum class Status { pass, fail, diagnostic };

std::string to_string(Status status);

/// One CSV row. `t` and `s` are absent for grid-independent metrics.
struct Row {
  std::optional<double> t, s;
  std::string metric;
  double value = 0.0;
};

/// Whitespace-delimited series written to `<check>_<suffix>.dat`.
struct PlotSeries {
  std::string suffix;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CheckRecord {
  std::string name;
  Status status = Status::diagnostic;
  double value = 0.0;  // headline measurement
  std::optional<double> bound;
  std::optional<double> tolerance;
  std::string message;
  std::vector<Row> rows;
  std::vector<PlotSeries> plots;
  std::optional<double> wall_time;  // seconds; only recorded on request
};

struct RunReport {
  std::string scenario;
  std::string tool_version;
  std::string config_echo;
  std::vector<CheckRecord> records;
  std::vector<std::string> artifacts;  // file names relative to the output directory

  bool failed() const;
};

/// `results.csv` with columns scenario,check,t,s,metric,value.
std::filesystem::path write_csv(const RunReport& report, const std::filesystem::path& dir);
/// One file per plot series; returns the paths in record order.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);
/// `report.json`.
std::filesystem::path write_json(const RunReport& report, const std::filesystem::path& dir);

/// Creates `dir`, writes CSV and plot files, records their names in
/// report.artifacts and finally writes the JSON report.
void write_artifacts(RunReport& report, const std::filesystem::path& dir);

}  // namespace ergolab::cli
