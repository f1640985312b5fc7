#include "lsq/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace lsq {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

static double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  std::size_t begin = cell.find_first_not_of(" \t");
  std::size_t end = cell.find_last_not_of(" \t");
  if (begin == std::string::npos) {
    throw std::runtime_error("csv row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                             ": empty cell");
  }
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end + 1;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error("csv row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                             ": cannot parse '" + cell + "' as a number");
  }
  return value;
}

std::vector<std::vector<double>> load_csv_rows(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && has_header) continue;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw std::runtime_error("csv row " + std::to_string(lineno) + ": expected " +
                               std::to_string(width) + " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row[c] = parse_cell(cells[c], lineno, c);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv '" + path + "' contains no data rows");
  return rows;
}

Dataset load_csv(const std::string& path, bool has_header, double bandwidth) {
  auto rows = load_csv_rows(path, has_header);
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Dataset(std::move(flat), dim, bandwidth);
}

}  // namespace lsq
