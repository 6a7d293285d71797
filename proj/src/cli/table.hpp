#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Result tables shared by all subcommands, with CSV and JSON writers.
namespace outage::cli {

// Empty cell = undefined value, written as NA (CSV) or null (JSON).
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Throws std::invalid_argument when the row width differs from columns.
  void add_row(std::vector<Cell> row);
};

inline constexpr std::string_view kUndefined = "NA";

// printf("%.12g").
std::string format_number(double value);

// value rounded to 12 significant digits.
double round_significant(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

// Inverse of to_csv: integers, reals, NA and (optionally quoted) strings.
// Throws std::invalid_argument on malformed input.
Table parse_csv(std::string_view text);

}  // namespace outage::cli
