#pragma once

#include <string>
#include <vector>

#include "lsq/point.hpp"

namespace lsq {

// Parses a dense numeric CSV (comma separated, optional single header row,
// one point per line) into a matrix of rows. Errors carry the 1-based row
// number of the offending line.
std::vector<std::vector<double>> load_csv_rows(const std::string& path, bool has_header);

// Same, but wraps the rows into a Dataset carrying `bandwidth`.
Dataset load_csv(const std::string& path, bool has_header, double bandwidth = 1.0);

// Splits one CSV line into cells, honoring RFC-4180 quoting.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace lsq
