#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaoa/harness.hpp"

namespace qaoa::report {

enum class ReportKind { BoxplotTable, DepthCurve, SuccessCurve };
enum class Format { Csv, Svg };

std::string kind_name(ReportKind k);  // "boxplot_table", "depth_curve", "success_curve"
ReportKind parse_kind(const std::string& name);
Format parse_format(const std::string& name);

struct ReportSpec {
  std::filesystem::path input;
  ReportKind kind = ReportKind::BoxplotTable;
  std::vector<std::string> group_by;  // empty: per-kind default
  Format format = Format::Csv;
};

/// Thrown when the records lack a column the report needs.
class MissingColumn : public std::runtime_error {
 public:
  explicit MissingColumn(const std::string& column)
      : std::runtime_error("records have no '" + column + "' column"), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// Boxplot groups default to (optimizer, depth, backend); curves default to one series per backend.
std::vector<std::string> default_group_by(ReportKind k);
std::vector<std::string> required_columns(ReportKind k, const std::vector<std::string>& group_by);

struct Report {
  std::string csv;
  std::string svg;
};

/// Both renderings from a results table. Curves are keyed by the group-by columns other than depth.
Report build_report(const harness::Table& table, ReportKind kind, std::vector<std::string> group_by = {});

/// Writes <stem>.csv or <stem>.svg into out_dir, where stem is the report kind; returns the path.
std::filesystem::path write_report(const ReportSpec& spec, const std::filesystem::path& out_dir);

}  // namespace qaoa::report
