#include "tcsd/csv_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tcsd {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_cell(const std::string& cell, const std::string& path, int line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                ": cannot parse numeric cell '" + cell + "'");
  if (!std::isfinite(v))
    throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                ": non-finite value '" + cell + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // row-major
};

Table read_table(const std::string& path, std::size_t min_cols,
                 std::size_t max_cols) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open file: " + path);

  Table t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (t.header.empty()) {
      t.header = cells;
      if (t.header.size() < min_cols || t.header.size() > max_cols)
        throw std::invalid_argument(path + ":1: expected " +
                                    std::to_string(min_cols) + "-" +
                                    std::to_string(max_cols) + " columns");
      continue;
    }
    if (cells.size() != t.header.size())
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": column count differs from header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, path, line_no));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty())
    throw std::invalid_argument(path + ": empty file (header required)");
  return t;
}

void expect_column(const Table& t, std::size_t idx, const std::string& name,
                   const std::string& path) {
  if (t.header.size() <= idx || t.header[idx] != name)
    throw std::invalid_argument(path + ":1: expected column '" + name +
                                "' at position " + std::to_string(idx + 1));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SweepData parse_sweep_csv(const std::string& path) {
  const Table t = read_table(path, 2, 3);
  expect_column(t, 0, "b_gauss", path);
  expect_column(t, 1, "amplitude", path);
  const bool has_sigma = t.header.size() == 3;
  if (has_sigma) expect_column(t, 2, "sigma", path);

  SweepData out;
  for (const auto& row : t.rows) {
    out.b_gauss.push_back(row[0]);
    out.amplitude.push_back(row[1]);
    out.sigma.push_back(has_sigma ? row[2] : 1.0);
  }
  out.sort_by_field();
  out.validate();
  return out;
}

void write_sweep_csv(const std::string& path, const SweepData& sweep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "b_gauss,amplitude,sigma\n";
  for (std::size_t i = 0; i < sweep.size(); ++i)
    out << format_double(sweep.b_gauss[i]) << ','
        << format_double(sweep.amplitude[i]) << ','
        << format_double(sweep.sigma.empty() ? 1.0 : sweep.sigma[i]) << '\n';
}

SpectrumData parse_spectrum_csv(const std::string& path) {
  const Table t = read_table(path, 2, 3);
  expect_column(t, 0, "delta_mhz", path);
  expect_column(t, 1, "counts", path);
  const bool has_sigma = t.header.size() == 3;
  if (has_sigma) expect_column(t, 2, "sigma", path);

  SpectrumData out;
  for (const auto& row : t.rows) {
    out.delta_mhz.push_back(row[0]);
    out.counts.push_back(row[1]);
    out.sigma.push_back(has_sigma ? row[2] : 1.0);
  }
  out.sort_by_detuning();
  out.validate();
  return out;
}

void write_spectrum_csv(const std::string& path, const SpectrumData& spectrum) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "delta_mhz,counts,sigma\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    out << format_double(spectrum.delta_mhz[i]) << ','
        << format_double(spectrum.counts[i]) << ','
        << format_double(spectrum.sigma.empty() ? 1.0 : spectrum.sigma[i])
        << '\n';
}

PLEMap parse_map_csv(const std::string& path) {
  const Table t = read_table(path, 3, 3);
  expect_column(t, 0, "b_gauss", path);
  expect_column(t, 1, "delta_mhz", path);
  expect_column(t, 2, "amplitude", path);
  if (t.rows.empty())
    throw std::invalid_argument(path + ": no data rows");

  std::map<double, std::size_t> b_idx, d_idx;
  for (const auto& row : t.rows) {
    b_idx.emplace(row[0], 0);
    d_idx.emplace(row[1], 0);
  }
  PLEMap map;
  for (auto& [v, idx] : b_idx) {
    idx = map.b_gauss.size();
    map.b_gauss.push_back(v);
  }
  for (auto& [v, idx] : d_idx) {
    idx = map.delta_mhz.size();
    map.delta_mhz.push_back(v);
  }
  if (t.rows.size() != map.b_gauss.size() * map.delta_mhz.size())
    throw std::invalid_argument(path + ": rows do not form a complete grid");

  const double nan = std::nan("");
  map.amplitude.assign(map.b_gauss.size(),
                       std::vector<double>(map.delta_mhz.size(), nan));
  for (const auto& row : t.rows) {
    const std::size_t i = b_idx[row[0]], j = d_idx[row[1]];
    if (!std::isnan(map.amplitude[i][j]))
      throw std::invalid_argument(path + ": duplicate grid cell");
    map.amplitude[i][j] = row[2];
  }
  map.validate();
  return map;
}

void write_map_csv(const std::string& path, const PLEMap& map) {
  map.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "b_gauss,delta_mhz,amplitude\n";
  for (std::size_t i = 0; i < map.b_gauss.size(); ++i)
    for (std::size_t j = 0; j < map.delta_mhz.size(); ++j)
      out << format_double(map.b_gauss[i]) << ','
          << format_double(map.delta_mhz[j]) << ','
          << format_double(map.amplitude[i][j]) << '\n';
}

void parse_gfactor_csv(const std::string& path, std::vector<double>& g,
                       std::vector<double>& sigma) {
  const Table t = read_table(path, 1, 2);
  expect_column(t, 0, "g_h", path);
  const bool has_sigma = t.header.size() == 2;
  if (has_sigma) expect_column(t, 1, "sigma", path);

  g.clear();
  sigma.clear();
  for (const auto& row : t.rows) {
    g.push_back(row[0]);
    sigma.push_back(has_sigma ? row[1] : 1.0);
  }
}

}  // namespace tcsd
