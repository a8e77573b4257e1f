#pragma once
/** \file
 * Numeric result tables with a metadata block, serialized as CSV or JSON.
 */

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qchaos {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

  /// Appends a row; its length must match the column count.
  void add_row(std::vector<double> row);

  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);

/// Only the header and data lines of the CSV encoding (no metadata comments).
std::string csv_data(const ResultTable& table);

/// Metadata as `# key: value` comment lines, then header and rows.
std::string to_csv(const ResultTable& table);

/// {metadata, columns, rows}; non-finite numbers become null.
std::string to_json(const ResultTable& table);

ResultTable table_from_json(std::string_view text);
ResultTable table_from_csv(std::string_view text);

std::string serialize(const ResultTable& table, OutputFormat format);

/// Writes to `path`, or to stdout when path is empty or "-". Throws IoError.
void write_table(const ResultTable& table, const std::filesystem::path& path, OutputFormat format);

}  // namespace qchaos
