#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pasmin/errors.hpp"
#include "pasmin/harness.hpp"
#include "pasmin/observations.hpp"

namespace pasmin {

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = comma == std::string_view::npos
                                 ? line.substr(start)
                                 : line.substr(start, comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() &&
           (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    fields.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline double parse_double(const std::string& field, int row, const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw CsvError("row " + std::to_string(row) + ": cannot parse " + column + " value '" +
                   field + "'");
  }
  if (!std::isfinite(value)) {
    throw CsvError("row " + std::to_string(row) + ": non-finite " + column + " value");
  }
  return value;
}

}  // namespace detail

/// Reads observations from a CSV file with the header x1,...,xd,y. Rows are
/// numbered from 1 including the header, so error messages name file lines.
inline Dataset read_observations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw CsvError("row 1: missing header");
  const std::vector<std::string> header = detail::split_csv_line(line);
  if (header.size() < 2 || header.back() != "y") {
    throw CsvError("row 1: header must be x1,...,xd,y");
  }
  const int dim = static_cast<int>(header.size()) - 1;
  for (int j = 0; j < dim; ++j) {
    const std::string expected = "x" + std::to_string(j + 1);
    if (header[static_cast<std::size_t>(j)] != expected) {
      throw CsvError("row 1: expected column '" + expected + "', found '" +
                     header[static_cast<std::size_t>(j)] + "'");
    }
  }

  Dataset data(dim);
  std::vector<double> x(static_cast<std::size_t>(dim));
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw CsvError("row " + std::to_string(row) + ": expected " +
                     std::to_string(header.size()) + " fields, found " +
                     std::to_string(fields.size()));
    }
    for (int j = 0; j < dim; ++j) {
      x[static_cast<std::size_t>(j)] =
          detail::parse_double(fields[static_cast<std::size_t>(j)], row,
                               "x" + std::to_string(j + 1));
    }
    const double y = detail::parse_double(fields.back(), row, "y");
    data.append(x, y);
  }
  return data;
}

inline void write_observations_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write " + path);
  std::ostringstream text;
  for (int j = 0; j < data.dim(); ++j) text << 'x' << (j + 1) << ',';
  text << "y\n";
  text.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto ob = data[i];
    for (double c : ob.x) text << c << ',';
    text << ob.y << '\n';
  }
  out << text.str();
}

/// Plot-ready flat table of the per-(target, n) risk estimates.
inline void write_risk_csv(const std::string& path, const RiskReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write " + path);
  std::ostringstream text;
  text << "target,n,mean_risk,stderr,replications\n";
  text.precision(17);
  for (const RiskCell& c : report.cells) {
    text << to_string(c.target) << ',' << c.n << ',' << c.mean_risk << ',' << c.std_error
         << ',' << c.replications << '\n';
  }
  out << text.str();
}

}  // namespace pasmin
