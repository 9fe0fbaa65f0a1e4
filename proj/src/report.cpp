#include "walshlab/report.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <stdexcept>

#include "walshlab/grid.hpp"

namespace walshlab {

void ExperimentReport::add_row(std::vector<ReportCell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("report row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::vector<double> ExperimentReport::column(const std::string& name) const {
  std::size_t index = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) index = i;
  }
  if (index == columns.size()) throw std::out_of_range("no report column named " + name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const auto& cell = row[index];
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
      out.push_back(static_cast<double>(*i));
    } else if (const auto* d = std::get_if<double>(&cell)) {
      out.push_back(*d);
    } else {
      throw std::invalid_argument("column " + name + " is not numeric");
    }
  }
  return out;
}

namespace {

std::string csv_cell(const ReportCell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  const auto& text = std::get<std::string>(cell);
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

nlohmann::ordered_json json_cell(const ReportCell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(cell);
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    out << (i ? "," : "") << report.columns[i];
  }
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  auto config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  j["config"] = config;
  auto provenance = nlohmann::ordered_json::object();
  provenance["seed"] = report.provenance.seed ? nlohmann::ordered_json(*report.provenance.seed) : nullptr;
  provenance["resolution"] = report.provenance.resolution;
  if (report.provenance.timestamp) provenance["timestamp"] = *report.provenance.timestamp;
  j["provenance"] = provenance;
  for (const auto& [key, value] : report.summary.items()) j[key] = value;
  j["columns"] = report.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(json_cell(cell));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  out << report_to_json(report).dump(2) << '\n';
}

std::optional<std::string> reproducible_timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  const long long seconds = std::strtoll(env, &end, 10);
  if (*end != '\0') return std::nullopt;
  const std::time_t t = static_cast<std::time_t>(seconds);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string(buffer);
}

}  // namespace walshlab
