#pragma once

// CSV output with round-trip-exact numeric formatting.  Every floating-point
// cell goes through the shortest representation that re-reads to the same
// double, so files are byte-stable across reruns of the same configuration.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablesum/config.hpp"

namespace stablesum {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw std::invalid_argument("CsvTable: row width does not match header");
    rows.push_back(std::move(row));
  }
};

inline std::string csv_to_string(const CsvTable& t) {
  std::string out;
  auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ",";
      out += cells[i];
    }
    out += "\n";
  };
  join(t.header);
  for (const auto& r : t.rows) join(r);
  return out;
}

inline void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  out << csv_to_string(t);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_text_file: cannot open '" + path + "'");
  out << text;
}

}  // namespace stablesum
