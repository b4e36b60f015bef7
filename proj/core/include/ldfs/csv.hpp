#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ldfs::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // ragged rows are padded on read

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return header.size(); }
};

// Reads a delimited text file with a header row. Supports double-quoted
// fields with embedded delimiters/quotes. Throws EmptyFile / IoError.
Table read_table(const std::string& path, char delim = ',');

void write_table(const std::string& path, const Table& table, char delim = ',');

// Splits one line respecting double quotes.
std::vector<std::string> split_line(const std::string& line, char delim);

// Numeric cell parsing: empty, "NA", "NaN", "null" (case-insensitive) are
// missing; anything else must parse fully as a double.
std::optional<double> parse_number(const std::string& cell);
bool is_missing(const std::string& cell);

// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);
// Fixed 4-decimal form used by report tables.
std::string format_metric(double v);

std::string trim(const std::string& s);
std::string to_lower(const std::string& s);

}  // namespace ldfs::csv
