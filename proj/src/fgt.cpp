#include "lsq/fgt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace lsq::fgt {

std::vector<double> hermite_values(double t, int rho) {
  if (rho < 0) throw std::invalid_argument("hermite_values: order must be non-negative");
  std::vector<double> h(static_cast<std::size_t>(rho) + 1);
  const double envelope = std::exp(-t * t);
  double p_prev = 1.0;  // P_0
  h[0] = envelope;
  if (rho >= 1) {
    double p_cur = 2.0 * t;  // P_1
    h[1] = envelope * p_cur;
    for (int r = 1; r < rho; ++r) {
      const double p_next = 2.0 * t * p_cur - 2.0 * r * p_prev;
      p_prev = p_cur;
      p_cur = p_next;
      h[static_cast<std::size_t>(r) + 1] = envelope * p_cur;
    }
  }
  return h;
}

double f_range_l1_bound(int rho, std::size_t dim) {
  if (rho < 1) throw std::invalid_argument("f_range_l1_bound: rho must be at least 1");
  double axis = 0.0;
  double term = 1.0;
  for (int r = 0; r <= rho; ++r) {
    axis += term;
    term *= 0.5;
  }
  double out = 1.0;
  for (std::size_t j = 0; j < dim; ++j) out *= axis;
  return out;
}

namespace {

// Integer centers m whose unit cell [m - 1/2, m + 1/2]^d intersects the ball
// of radius `radius` around the origin, in lexicographic order.
std::vector<std::int32_t> enumerate_cells(double radius, std::size_t dim) {
  const double r2 = radius * radius;
  const std::int32_t reach = static_cast<std::int32_t>(std::floor(radius + 0.5));
  std::vector<std::int32_t> cells;
  std::vector<std::int32_t> m(dim, -reach);
  while (true) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double gap = std::max(0.0, std::abs(static_cast<double>(m[j])) - 0.5);
      dist2 += gap * gap;
    }
    if (dist2 <= r2) cells.insert(cells.end(), m.begin(), m.end());

    std::size_t j = dim;
    while (j > 0) {
      if (++m[j - 1] <= reach) break;
      m[j - 1] = -reach;
      --j;
    }
    if (j == 0) break;
  }
  return cells;
}

int lex_compare(const std::int32_t* a, const std::int32_t* b, std::size_t dim) {
  for (std::size_t j = 0; j < dim; ++j) {
    if (a[j] != b[j]) return a[j] < b[j] ? -1 : 1;
  }
  return 0;
}

}  // namespace

FgtFamily::FgtFamily(double radius, std::size_t dim, int rho, std::vector<double> center,
                     std::uint64_t memory_cap_bytes) {
  if (dim == 0) throw std::invalid_argument("fgt: dimension must be positive");
  if (rho < 1) throw std::invalid_argument("fgt: rho must be at least 1");
  if (rho > kMaxRho) {
    throw std::invalid_argument("fgt: rho " + std::to_string(rho) + " exceeds the cap of " +
                                std::to_string(kMaxRho));
  }
  if (!(radius > 0.0)) throw std::invalid_argument("fgt: ball radius must be positive");
  if (center.empty()) center.assign(dim, 0.0);
  if (center.size() != dim) throw std::invalid_argument("fgt: center dimension mismatch");

  descriptor_.rho = rho;
  descriptor_.radius = radius;
  descriptor_.dim = static_cast<std::uint32_t>(dim);
  descriptor_.center = std::move(center);
  descriptor_.cells = enumerate_cells(radius, dim);

  block_size_ = 1;
  for (std::size_t j = 0; j < dim; ++j) {
    const std::uint64_t next = block_size_ * static_cast<std::uint64_t>(rho + 1);
    if (next / (rho + 1) != block_size_) throw std::invalid_argument("fgt: block size overflows");
    block_size_ = next;
  }
  const std::uint64_t cells = descriptor_.cell_count();
  if (cells == 0) throw std::logic_error("fgt: ball intersects no grid cell");
  if (block_size_ > memory_cap_bytes / sizeof(double) / cells) {
    throw std::invalid_argument("fgt: " + std::to_string(cells) + " cells x " +
                                std::to_string(block_size_) +
                                " expansion terms exceed the memory cap; reduce rho or the radius");
  }

  inv_factorial_.resize(static_cast<std::size_t>(rho) + 1);
  double fact = 1.0;
  for (int r = 0; r <= rho; ++r) {
    if (r > 0) fact *= r;
    inv_factorial_[static_cast<std::size_t>(r)] = 1.0 / fact;
  }
}

LsqParams FgtFamily::params() const {
  const std::uint64_t q = descriptor_.cell_count() * block_size_;
  const double range = std::pow(1.6, static_cast<double>(descriptor_.dim));
  // Sparsity: f touches one cell block; g touches every cell within sqrt(rho),
  // at most floor(2*sqrt(rho)) + 1 centers per axis.
  const double per_axis = std::floor(2.0 * std::sqrt(static_cast<double>(descriptor_.rho))) + 1.0;
  double g_cells = 1.0;
  for (std::uint32_t j = 0; j < descriptor_.dim; ++j) g_cells *= per_axis;
  const double s = std::min(static_cast<double>(q), g_cells * static_cast<double>(block_size_));
  return {q, range, static_cast<std::uint64_t>(s)};
}

PairDescriptor FgtFamily::sample(SplitRng&) const { return descriptor_; }

double FgtFamily::f_range_l1() const {
  return f_range_l1_bound(descriptor_.rho, descriptor_.dim);
}

std::size_t FgtFamily::find_cell(const std::int32_t* m) const {
  const std::size_t d = descriptor_.dim;
  std::size_t lo = 0;
  std::size_t hi = descriptor_.cell_count();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int cmp = lex_compare(descriptor_.cells.data() + mid * d, m, d);
    if (cmp < 0) {
      lo = mid + 1;
    } else if (cmp > 0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return static_cast<std::size_t>(-1);
}

// Tensor product of the d per-axis tables into a dense block of size
// (rho+1)^d, last axis fastest.
void FgtFamily::fill_block(std::span<const std::vector<double>> per_axis, double* out) const {
  const std::size_t w = static_cast<std::size_t>(descriptor_.rho) + 1;
  out[0] = 1.0;
  std::size_t filled = 1;
  for (const auto& table : per_axis) {
    for (std::size_t k = filled; k-- > 0;) {
      const double base = out[k];
      double* dst = out + k * w;
      for (std::size_t r = 0; r < w; ++r) dst[r] = base * table[r];
    }
    filled *= w;
  }
}

void FgtFamily::eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                            SparseVector& out) const {
  check_dim(x, "fgt");
  const auto& d = std::get<FgtDescriptor>(desc);
  const std::size_t dim = d.dim;
  const std::size_t w = static_cast<std::size_t>(d.rho) + 1;

  const double cell_reach = std::floor(d.radius + 0.5);
  std::vector<std::int32_t> m(dim);
  std::vector<std::vector<double>> powers(dim, std::vector<double>(w));
  for (std::size_t j = 0; j < dim; ++j) {
    const double shifted = x[j] - d.center[j];
    const double nearest = std::ceil(shifted - 0.5);  // offsets lie in (-1/2, 1/2]
    if (std::abs(nearest) > cell_reach) {
      throw std::invalid_argument("fgt: point lies outside the radius-" + std::to_string(d.radius) +
                                  " data ball; rebuild the family with a radius covering it");
    }
    m[j] = static_cast<std::int32_t>(nearest);
    const double t = shifted - m[j];
    double p = 1.0;
    for (std::size_t r = 0; r < w; ++r) {
      powers[j][r] = p;
      p *= t;
    }
  }
  const std::size_t cell = find_cell(m.data());
  if (cell == static_cast<std::size_t>(-1)) {
    throw std::invalid_argument("fgt: point lies outside the radius-" + std::to_string(d.radius) +
                                " data ball; rebuild the family with a radius covering it");
  }

  std::vector<double> block(block_size_);
  fill_block(powers, block.data());

  out.clear();
  out.dim = d.cell_count() * block_size_;
  const std::uint64_t base = static_cast<std::uint64_t>(cell) * block_size_;
  for (std::uint64_t k = 0; k < block_size_; ++k) out.push(base + k, block[k]);
}

void FgtFamily::eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                            SparseVector& out) const {
  check_dim(y, "fgt");
  const auto& d = std::get<FgtDescriptor>(desc);
  const std::size_t dim = d.dim;
  const std::size_t w = static_cast<std::size_t>(d.rho) + 1;
  const double rho = static_cast<double>(d.rho);
  const double reach = std::sqrt(rho);

  out.clear();
  out.dim = d.cell_count() * block_size_;

  const double cell_reach = std::floor(d.radius + 0.5);
  std::vector<double> shifted(dim);
  std::vector<std::int32_t> lo(dim), hi(dim), m(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    shifted[j] = y[j] - d.center[j];
    const double lo_f = std::max(std::ceil(shifted[j] - reach), -cell_reach);
    const double hi_f = std::min(std::floor(shifted[j] + reach), cell_reach);
    if (lo_f > hi_f) return;  // all candidate cells on this axis miss the grid
    lo[j] = static_cast<std::int32_t>(lo_f);
    hi[j] = static_cast<std::int32_t>(hi_f);
    m[j] = lo[j];
  }

  std::vector<std::vector<double>> ghat(dim, std::vector<double>(w));
  std::vector<double> block(block_size_);

  // Lexicographic sweep of the candidate box keeps the emitted coordinate
  // blocks in increasing order, matching the sorted cell list.
  while (true) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double t = shifted[j] - m[j];
      dist2 += t * t;
    }
    if (dist2 <= rho) {
      const std::size_t cell = find_cell(m.data());
      if (cell != static_cast<std::size_t>(-1)) {
        for (std::size_t j = 0; j < dim; ++j) {
          const auto h = hermite_values(shifted[j] - m[j], d.rho);
          for (std::size_t r = 0; r < w; ++r) ghat[j][r] = h[r] * inv_factorial_[r];
        }
        fill_block(ghat, block.data());
        const std::uint64_t base = static_cast<std::uint64_t>(cell) * block_size_;
        for (std::uint64_t k = 0; k < block_size_; ++k) out.push(base + k, block[k]);
      }
    }

    std::size_t j = dim;
    while (j > 0) {
      if (++m[j - 1] <= hi[j - 1]) break;
      m[j - 1] = lo[j - 1];
      --j;
    }
    if (j == 0) break;
  }
}

void FgtFamily::accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                                  std::span<double> accum) const {
  const auto& d = std::get<FgtDescriptor>(desc);
  const std::size_t dim = d.dim;
  const std::size_t w = static_cast<std::size_t>(d.rho) + 1;
  const double inv_n = 1.0 / static_cast<double>(dataset.size());

  const double cell_reach = std::floor(d.radius + 0.5);
  std::vector<std::int32_t> m(dim);
  std::vector<std::vector<double>> powers(dim, std::vector<double>(w));
  std::vector<double> block(block_size_);

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto x = dataset.point(i);
    bool inside = true;
    for (std::size_t j = 0; j < dim; ++j) {
      const double shifted = x[j] - d.center[j];
      const double nearest = std::ceil(shifted - 0.5);
      inside = inside && std::abs(nearest) <= cell_reach;
      m[j] = inside ? static_cast<std::int32_t>(nearest) : 0;
      const double t = shifted - nearest;
      double p = 1.0;
      for (std::size_t r = 0; r < w; ++r) {
        powers[j][r] = p;
        p *= t;
      }
    }
    const std::size_t cell = inside ? find_cell(m.data()) : static_cast<std::size_t>(-1);
    if (cell == static_cast<std::size_t>(-1)) {
      throw std::invalid_argument("fgt: dataset point " + std::to_string(i) +
                                  " lies outside the radius-" + std::to_string(d.radius) +
                                  " ball the family was built for");
    }
    fill_block(powers, block.data());
    double* dst = accum.data() + static_cast<std::uint64_t>(cell) * block_size_;
    for (std::uint64_t k = 0; k < block_size_; ++k) dst[k] += block[k] * inv_n;
  }
}

std::unique_ptr<FgtFamily> make_family(double radius, std::size_t dim, int rho) {
  return std::make_unique<FgtFamily>(radius, dim, rho, std::vector<double>());
}

std::unique_ptr<FgtFamily> make_family_for_dataset(const Dataset& dataset, int rho,
                                                   const FgtOptions& options) {
  const std::size_t dim = dataset.dim();
  std::vector<double> center(dim, 0.0);
  if (options.public_center) {
    if (options.public_center->size() != dim) {
      throw std::invalid_argument("fgt: public center dimension mismatch");
    }
    center = *options.public_center;
  } else if (options.center_at_centroid) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto p = dataset.point(i);
      for (std::size_t j = 0; j < dim; ++j) center[j] += p[j];
    }
    for (double& c : center) c /= static_cast<double>(dataset.size());
  }

  double max_sq = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto p = dataset.point(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double t = p[j] - center[j];
      sq += t * t;
    }
    max_sq = std::max(max_sq, sq);
  }
  const double radius = std::max(std::sqrt(max_sq), 1e-6);
  return std::make_unique<FgtFamily>(radius, dim, rho, std::move(center),
                                     options.memory_cap_bytes);
}

}  // namespace lsq::fgt
