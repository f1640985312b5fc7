#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace lsq {

// One sampled Fourier feature: frequency vector plus phase in [0, 2*pi).
struct RffDescriptor {
  std::vector<double> omega;
  double beta = 0.0;
};

// The (single) quantization pair of the Hermite-expansion family: truncation
// order, data ball radius, grid placement offset, and the ordered list of unit
// grid cells (integer centers, lexicographic) that intersect the ball. The
// position of a cell in `cells` times (rho+1)^d is its dense coordinate block.
struct FgtDescriptor {
  std::int32_t rho = 0;
  double radius = 0.0;
  std::uint32_t dim = 0;
  std::vector<double> center;        // subtracted from every input point
  std::vector<std::int32_t> cells;   // flat, dim entries per cell
  std::size_t cell_count() const { return dim == 0 ? 0 : cells.size() / dim; }
};

// One random-binning hash: per-axis pitch/shift plus the seed of the
// pairwise-independent compression hash into `buckets` buckets.
struct RandomBinningDescriptor {
  std::vector<double> pitch;
  std::vector<double> shift;
  std::uint64_t hash_seed = 0;
  std::uint64_t buckets = 1;
};

using PairDescriptor = std::variant<RffDescriptor, FgtDescriptor, RandomBinningDescriptor>;

}  // namespace lsq
