#include "rnd/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rnd {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& text, double* out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') return false;
  *out = v;
  return true;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (const auto& cell : cells) {
      double v = 0.0;
      if (!parse_double(cell, &v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::runtime_error("csv: non-numeric cell outside the header in '" + path + "'");
    }
    first = false;
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw std::runtime_error("csv: ragged row in '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows in '" + path + "'");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Sample read_sample_csv(const std::string& path, SampleLabel label) {
  return Sample{read_csv_matrix(path), label};
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::logic_error("csv: row width differs from header width");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace rnd
