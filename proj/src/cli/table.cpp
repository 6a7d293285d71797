#include "cli/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace outage::cli {
namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

void write_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out += '"';
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return std::string(kUndefined);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return std::get<std::string>(cell);
}

Cell classify(const std::string& text, bool quoted) {
  if (quoted) return text;
  if (text == kUndefined) return std::monostate{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  std::int64_t integer = 0;
  if (auto [ptr, ec] = std::from_chars(first, last, integer); ec == std::errc() && ptr == last) {
    return integer;
  }
  double real = 0.0;
  if (auto [ptr, ec] = std::from_chars(first, last, real); ec == std::errc() && ptr == last) {
    return real;
  }
  return text;
}

// Splits one CSV record starting at pos; advances pos past the line break.
std::vector<Cell> read_record(std::string_view text, std::size_t& pos) {
  std::vector<Cell> cells;
  std::string field;
  bool quoted = false;
  for (;;) {
    field.clear();
    quoted = false;
    if (pos < text.size() && text[pos] == '"') {
      quoted = true;
      ++pos;
      for (;;) {
        if (pos >= text.size()) throw std::invalid_argument("csv: unterminated quoted field");
        if (text[pos] == '"') {
          if (pos + 1 < text.size() && text[pos + 1] == '"') {
            field += '"';
            pos += 2;
            continue;
          }
          ++pos;
          break;
        }
        field += text[pos++];
      }
    } else {
      while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
        field += text[pos++];
      }
    }
    cells.push_back(classify(field, quoted));
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < text.size() && text[pos] == '\r') ++pos;
    if (pos < text.size() && text[pos] == '\n') ++pos;
    return cells;
  }
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("table: row has " + std::to_string(row.size()) +
                                " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += ',';
    write_field(out, table.columns[j]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      const bool is_text = std::holds_alternative<std::string>(row[j]);
      const std::string text = cell_text(row[j]);
      // Text that would re-parse as a number or NA keeps its type via quotes.
      if (is_text && !needs_quotes(text) &&
          !std::holds_alternative<std::string>(classify(text, false))) {
        out += '"' + text + '"';
      } else {
        write_field(out, text);
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& key = table.columns[j];
      const Cell& cell = row[j];
      if (std::holds_alternative<std::monostate>(cell)) {
        obj[key] = nullptr;
      } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        obj[key] = *i;
      } else if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d)) {
          obj[key] = round_significant(*d);
        } else {
          obj[key] = nullptr;
        }
      } else {
        obj[key] = std::get<std::string>(cell);
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

Table parse_csv(std::string_view text) {
  Table table;
  std::size_t pos = 0;
  if (text.empty()) throw std::invalid_argument("csv: empty input");
  for (const Cell& cell : read_record(text, pos)) {
    const auto* name = std::get_if<std::string>(&cell);
    if (!name) throw std::invalid_argument("csv: header fields must be names");
    table.columns.push_back(*name);
  }
  while (pos < text.size()) {
    table.add_row(read_record(text, pos));
  }
  return table;
}

}  // namespace outage::cli
