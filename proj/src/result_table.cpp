#include "qchaos/result_table.hpp"

#include "qchaos/types.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace qchaos {

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw ArgumentError("result row has " + std::to_string(row.size()) + " values for " +
                        std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ArgumentError("no column named '" + std::string(name) + "'");
}

std::vector<double> ResultTable::column(std::string_view name) const {
  const auto idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string csv_data(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (const auto& [key, value] : table.metadata.items()) {
    out += "# " + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + '\n';
  }
  return out + csv_data(table);
}

std::string to_json(const ResultTable& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = table.metadata;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + '\n';
}

ResultTable table_from_json(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("result table: ") + e.what());
  }
  ResultTable t;
  t.metadata = doc.value("metadata", nlohmann::ordered_json::object());
  t.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& r : doc.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    t.add_row(std::move(row));
  }
  return t;
}

ResultTable table_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  ResultTable t;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header) {
      t.columns = std::move(cells);
      header = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v = 0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc()) throw IoError("result table: bad number '" + c + "'");
      row.push_back(v);
    }
    t.add_row(std::move(row));
  }
  return t;
}

std::string serialize(const ResultTable& table, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(table) : to_json(table);
}

void write_table(const ResultTable& table, const std::filesystem::path& path, OutputFormat format) {
  const std::string text = serialize(table, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qchaos
