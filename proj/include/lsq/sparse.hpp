#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lsq {

// Sparse view of a vector in R^Q: entries sorted by strictly increasing index,
// values finite and nonzero.
struct SparseVector {
  struct Entry {
    std::uint64_t index;
    double value;
    bool operator==(const Entry&) const = default;
  };

  std::vector<Entry> entries;
  std::uint64_t dim = 0;

  std::size_t nnz() const { return entries.size(); }

  void clear() { entries.clear(); }

  void push(std::uint64_t index, double value) {
    if (value != 0.0) entries.push_back({index, value});
  }

  double l1() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += std::abs(e.value);
    return sum;
  }

  bool well_formed() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].index >= dim) return false;
      if (i > 0 && entries[i].index <= entries[i - 1].index) return false;
      if (entries[i].value == 0.0 || !std::isfinite(entries[i].value)) return false;
    }
    return true;
  }
};

}  // namespace lsq
