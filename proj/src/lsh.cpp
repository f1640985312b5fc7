#include "lsq/lsh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsq::lsh {

namespace {

constexpr double kMaxBinIndex = 2147483648.0;  // 2^31

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double bin_index(double coord, double shift, double pitch, std::size_t axis) {
  const double idx = std::floor((coord - shift) / pitch);
  if (!(std::abs(idx) < kMaxBinIndex)) {
    throw std::invalid_argument("lsh: bin index on axis " + std::to_string(axis) +
                                " exceeds 2^31; rescale the data");
  }
  return idx;
}

}  // namespace

RandomBinningDescriptor sample_binning(std::size_t dim, std::uint64_t buckets, SplitRng& rng) {
  if (dim == 0) throw std::invalid_argument("lsh: dimension must be positive");
  if (buckets == 0) throw std::invalid_argument("lsh: bucket count must be positive");
  RandomBinningDescriptor desc;
  desc.pitch.resize(dim);
  desc.shift.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    desc.pitch[j] = rng.gamma2();
    desc.shift[j] = rng.uniform(0.0, desc.pitch[j]);
  }
  desc.hash_seed = rng.next_u64();
  desc.buckets = buckets;
  return desc;
}

std::vector<std::int64_t> bin_indices(const RandomBinningDescriptor& desc, std::span<const double> p) {
  if (p.size() != desc.pitch.size()) {
    throw std::invalid_argument("lsh: point dimension does not match descriptor dimension");
  }
  std::vector<std::int64_t> bins(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    bins[j] = static_cast<std::int64_t>(bin_index(p[j], desc.shift[j], desc.pitch[j], j));
  }
  return bins;
}

std::uint64_t bucket_of(const RandomBinningDescriptor& desc, std::span<const double> p) {
  if (p.size() != desc.pitch.size()) {
    throw std::invalid_argument("lsh: point dimension does not match descriptor dimension");
  }
  // Mix the bin tuple into one 64-bit key, then apply a multiply-shift hash
  // whose multiplier/offset derive from the descriptor seed.
  std::uint64_t key = desc.hash_seed;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto bin = static_cast<std::uint64_t>(
        static_cast<std::int64_t>(bin_index(p[j], desc.shift[j], desc.pitch[j], j)));
    key = mix64(key ^ (bin + 0x9E3779B97F4A7C15ull * (j + 1)));
  }
  const std::uint64_t a = mix64(desc.hash_seed ^ 0x2545F4914F6CDD1Dull) | 1ull;
  const std::uint64_t b = mix64(desc.hash_seed ^ 0x6A09E667F3BCC909ull);
  const std::uint64_t v = a * key + b;
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * desc.buckets) >> 64);
}

std::uint64_t buckets_for_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("lsh: alpha must lie in (0, 1)");
  }
  return static_cast<std::uint64_t>(std::ceil(1.0 / alpha));
}

LshFamily::LshFamily(std::size_t dim, std::uint64_t buckets) : dim_(dim), buckets_(buckets) {
  if (dim == 0) throw std::invalid_argument("lsh: dimension must be positive");
  if (buckets == 0) throw std::invalid_argument("lsh: bucket count must be positive");
}

PairDescriptor LshFamily::sample(SplitRng& rng) const {
  return sample_binning(dim_, buckets_, rng);
}

void LshFamily::eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                            SparseVector& out) const {
  check_dim(x, "lsh");
  const auto& d = std::get<RandomBinningDescriptor>(desc);
  out.clear();
  out.dim = buckets_;
  out.push(bucket_of(d, x), 1.0);
}

void LshFamily::eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                            SparseVector& out) const {
  eval_f_into(desc, y, out);
}

void LshFamily::accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                                  std::span<double> accum) const {
  const auto& d = std::get<RandomBinningDescriptor>(desc);
  const double inv_n = 1.0 / static_cast<double>(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    accum[bucket_of(d, dataset.point(i))] += inv_n;
  }
}

std::unique_ptr<LshFamily> make_family(std::size_t dim, std::uint64_t buckets) {
  return std::make_unique<LshFamily>(dim, buckets);
}

}  // namespace lsq::lsh
