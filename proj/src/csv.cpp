#include "stablekit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "stablekit/datasets.hpp"
#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

// 0 ok, 1 not a number, 2 not finite
int parse_cell(const std::string& s, double& v) {
  if (s.empty()) return 1;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) {
    // from_chars rejects overflow; strtod reports it as inf
    if (r.ec == std::errc::result_out_of_range) return 2;
    return 1;
  }
  return std::isfinite(v) ? 0 : 2;
}

}  // namespace

std::vector<double> Dataset::univariate() const {
  if (values.cols() != 1)
    throw DimensionMismatch("expected one column, found " + std::to_string(values.cols()));
  return {values.data(), values.data() + values.rows()};
}

Dataset read_csv(const std::string& path, std::size_t expected_columns) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::vector<std::vector<double>> rows;
  std::size_t width = expected_columns;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    std::vector<double> vals(cells.size());
    bool header = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const int st = parse_cell(cells[c], vals[c]);
      if (st == 2)
        throw ParseError("non-finite value '" + cells[c] + "'", row, c + 1);
      if (st == 1) {
        if (rows.empty() && !header_seen) {
          header = true;
          break;
        }
        throw ParseError("cannot parse '" + cells[c] + "' as a number", row, c + 1);
      }
    }
    if (header) {
      header_seen = true;
      if (width == 0) width = cells.size();
      else if (cells.size() != width)
        throw DimensionMismatch("header has " + std::to_string(cells.size()) + " columns, expected " +
                                std::to_string(width));
      continue;
    }
    if (width == 0) width = vals.size();
    if (vals.size() != width)
      throw DimensionMismatch("row " + std::to_string(row) + " has " + std::to_string(vals.size()) +
                              " columns, expected " + std::to_string(width));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ParseError("no data rows in '" + path + "'", row, 0);
  Dataset d;
  d.name = path;
  d.source = DataSource::File;
  d.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return d;
}

Dataset embedded_dataset(const std::string& name) {
  const auto& v = datasets::by_name(name);
  Dataset d;
  d.name = name;
  d.source = DataSource::Embedded;
  d.values = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return d;
}

}  // namespace stablekit
