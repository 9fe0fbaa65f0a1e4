#pragma once

// Structured experiment output: a table of named columns plus a free-form
// summary, serialized to CSV (the table) and JSON (everything).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace walshlab {

using ReportCell = std::variant<std::int64_t, double, std::string>;

struct Provenance {
  std::optional<std::uint64_t> seed;
  int resolution = 0;
  /// Only set when SOURCE_DATE_EPOCH is present, so that repeated runs are
  /// byte-identical by default.
  std::optional<std::string> timestamp;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<ReportCell>> rows;
  /// Extra top-level JSON fields.
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  Provenance provenance;

  void add_row(std::vector<ReportCell> row);
  /// Column values as doubles (integers are widened); throws for text cells.
  [[nodiscard]] std::vector<double> column(const std::string& name) const;
};

/// Header line then one line per row; reals with 17 significant digits.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
nlohmann::ordered_json report_to_json(const ExperimentReport& report);
void write_report_json(std::ostream& out, const ExperimentReport& report);

/// Timestamp derived from SOURCE_DATE_EPOCH, if set.
std::optional<std::string> reproducible_timestamp();

}  // namespace walshlab
