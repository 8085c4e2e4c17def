#include "ergolab/cli/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ergolab/cli/config.hpp"

namespace ergolab::cli {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string plot_name(const CheckRecord& record, const PlotSeries& series) {
  return record.name + "_" + series.suffix + ".dat";
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_string(Status status) {
  switch (status) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::diagnostic: return "DIAGNOSTIC";
  }
  return "?";
}

bool RunReport::failed() const {
  return std::any_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.status == Status::fail; });
}

std::filesystem::path write_csv(const RunReport& report, const std::filesystem::path& dir) {
  const auto path = dir / "results.csv";
  auto out = open_for_write(path);
  out << "scenario,check,t,s,metric,value\n";
  for (const auto& record : report.records) {
    for (const auto& row : record.rows) {
      out << report.scenario << ',' << record.name << ',' << (row.t ? format_real(*row.t) : "") << ','
          << (row.s ? format_real(*row.s) : "") << ',' << row.metric << ',' << format_real(row.value) << '\n';
    }
  }
  finish(out, path);
  return path;
}

std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& record : report.records) {
    for (const auto& series : record.plots) {
      const auto path = dir / plot_name(record, series);
      auto out = open_for_write(path);
      out << '#';
      for (const auto& c : series.columns) out << ' ' << c;
      out << '\n';
      for (const auto& row : series.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << format_real(row[j]);
        out << '\n';
      }
      finish(out, path);
      paths.push_back(path);
    }
  }
  return paths;
}

std::filesystem::path write_json(const RunReport& report, const std::filesystem::path& dir) {
  nlohmann::ordered_json j;
  j["scenario"] = report.scenario;
  j["tool_version"] = report.tool_version;
  j["status"] = report.failed() ? "FAIL" : "PASS";
  auto& records = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json rec;
    rec["name"] = r.name;
    rec["status"] = to_string(r.status);
    rec["value"] = r.value;
    rec["bound"] = optional_number(r.bound);
    rec["tolerance"] = optional_number(r.tolerance);
    rec["message"] = r.message;
    if (r.wall_time) rec["wall_time_s"] = *r.wall_time;
    records.push_back(std::move(rec));
  }
  j["artifacts"] = report.artifacts;
  j["config"] = report.config_echo;
  const auto path = dir / "report.json";
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
  return path;
}

void write_artifacts(RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  report.artifacts.clear();
  report.artifacts.push_back(write_csv(report, dir).filename().string());
  for (const auto& p : emit_plot_data(report, dir)) report.artifacts.push_back(p.filename().string());
  report.artifacts.push_back("report.json");
  write_json(report, dir);
}

}  // namespace ergolab::cli
