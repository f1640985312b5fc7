#pragma once

#include <memory>

#include "lsq/family.hpp"

namespace lsq::lsh {

// Draws one random-binning hash for the (unit bandwidth) Laplacian kernel:
// per-axis pitch ~ Gamma(2, 1) and shift ~ Uniform[0, pitch), which makes the
// probability that two points share every per-axis bin exactly
// exp(-||x - y||_1), plus a fresh seed for the compression hash.
RandomBinningDescriptor sample_binning(std::size_t dim, std::uint64_t buckets, SplitRng& rng);

// Per-axis bin indices floor((p_j - shift_j) / pitch_j). Exposed as the
// uncompressed oracle for tests; indices beyond 2^31 are rejected.
std::vector<std::int64_t> bin_indices(const RandomBinningDescriptor& desc, std::span<const double> p);

// Multiply-shift pairwise-independent hash of the bin tuple into
// [0, buckets).
std::uint64_t bucket_of(const RandomBinningDescriptor& desc, std::span<const double> p);

// ceil(1/alpha) buckets give an additive compression error of at most alpha.
std::uint64_t buckets_for_alpha(double alpha);

// (ceil(1/alpha), 1, 1) family for the Laplacian kernel: f = g = one-hot
// indicator of the compressed bucket.
class LshFamily final : public LsqFamily {
 public:
  LshFamily(std::size_t dim, std::uint64_t buckets);

  FamilyTag tag() const override { return FamilyTag::kLsh; }
  std::size_t dim() const override { return dim_; }
  LsqParams params() const override { return {buckets_, 1.0, 1}; }
  PairDescriptor sample(SplitRng& rng) const override;
  void eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                   SparseVector& out) const override;
  void eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                   SparseVector& out) const override;
  void accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                         std::span<double> accum) const override;

  std::uint64_t buckets() const { return buckets_; }

 private:
  std::size_t dim_;
  std::uint64_t buckets_;
};

std::unique_ptr<LshFamily> make_family(std::size_t dim, std::uint64_t buckets);

}  // namespace lsq::lsh
