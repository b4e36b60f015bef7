#include "ldfs/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ldfs/error.hpp"

namespace ldfs::csv {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string to_lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

Table read_table(const std::string& path, char delim) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open '" + path + "'");
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_line(line, delim);
    if (!have_header) {
      for (auto& f : fields) f = trim(f);
      t.header = std::move(fields);
      have_header = true;
    } else {
      fields.resize(t.header.size());
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header || t.rows.empty()) {
    raise(errc::empty_file, "'" + path + "' has no data rows");
  }
  return t;
}

static std::string quote_if_needed(const std::string& field, char delim) {
  if (field.find_first_of(std::string("\"\n") + delim) == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void write_table(const std::string& path, const Table& table, char delim) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << delim;
    out << quote_if_needed(table.header[i], delim);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << delim;
      out << quote_if_needed(row[i], delim);
    }
    out << '\n';
  }
}

bool is_missing(const std::string& cell) {
  const std::string v = to_lower(trim(cell));
  return v.empty() || v == "na" || v == "nan" || v == "null" || v == "none";
}

std::optional<double> parse_number(const std::string& cell) {
  const std::string v = trim(cell);
  if (is_missing(v)) return std::nullopt;
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace ldfs::csv
