#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cnsp/errors.hpp"

namespace cnsp {

/// Column-oriented CSV table with a header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[c][row]

  std::size_t rows() const { return data.empty() ? 0 : data[0].size(); }

  const std::vector<double>& col(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return data[c];
    throw io_error("csv: missing column '" + name + "'");
  }
  bool has(const std::string& name) const {
    for (const auto& c : columns)
      if (c == name) return true;
    return false;
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty csv: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
  t.data.assign(t.columns.size(), {});
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= t.columns.size()) throw io_error("csv row wider than header: " + path);
      t.data[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (c != t.columns.size()) throw io_error("csv row narrower than header: " + path);
  }
  return t;
}

/// Shortest round-trip decimal formatting, for bit-identical reruns.
inline std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<const std::vector<double>*>& cols) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write '" + path + "'");
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  const std::size_t rows = cols.empty() ? 0 : cols[0]->size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& v = *cols[c];
      out << (c ? "," : "") << fmt_double(i < v.size() ? v[i] : v.back());
    }
    out << "\n";
  }
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory '" + dir + "': " + ec.message());
}

}  // namespace cnsp
