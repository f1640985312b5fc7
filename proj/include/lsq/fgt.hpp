#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lsq/family.hpp"

namespace lsq::fgt {

// h_0(t) .. h_rho(t) where h_r(t) = e^{-t^2} P_r(t) and P_r is the
// physicists' Hermite polynomial (P_{r+1} = 2t P_r - 2r P_{r-1}). O(rho).
std::vector<double> hermite_values(double t, int rho);

// Sum over multi-indices r in {0..rho}^d of the per-coordinate range bound
// 2^{-sum r_j}: the l1 envelope of f, equal to (sum_{r=0}^{rho} 2^-r)^d.
// This is the quantity the Laplace noise is calibrated against.
double f_range_l1_bound(int rho, std::size_t dim);

// Truncation order cap; factorials stay comfortably inside double range.
constexpr int kMaxRho = 30;

struct FgtOptions {
  bool center_at_centroid = true;
  std::optional<std::vector<double>> public_center;  // overrides the centroid
  std::uint64_t memory_cap_bytes = 2ull * 1024 * 1024 * 1024;
};

// Deterministic single-pair family over a unit grid covering a radius-`radius`
// ball: f places the per-cell monomials (x - z)^r, g places the matching
// Hermite factors h_r(y - z)/r! on every cell within squared distance rho of
// the query. The expected (here: exact, single-pair) inner product
// approximates exp(-||x-y||^2) up to the truncation error.
class FgtFamily final : public LsqFamily {
 public:
  FgtFamily(double radius, std::size_t dim, int rho, std::vector<double> center,
            std::uint64_t memory_cap_bytes = FgtOptions{}.memory_cap_bytes);

  FamilyTag tag() const override { return FamilyTag::kFgt; }
  std::size_t dim() const override { return descriptor_.dim; }
  LsqParams params() const override;
  PairDescriptor sample(SplitRng& rng) const override;  // always the same pair
  void eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                   SparseVector& out) const override;
  void eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                   SparseVector& out) const override;
  double f_range_l1() const override;
  void accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                         std::span<double> accum) const override;

  const FgtDescriptor& descriptor() const { return descriptor_; }
  std::uint64_t block_size() const { return block_size_; }

 private:
  // Index of the cell with integer center `m` in the lexicographic cell list,
  // or npos when the cell does not intersect the ball.
  std::size_t find_cell(const std::int32_t* m) const;
  void fill_block(std::span<const std::vector<double>> per_axis, double* out) const;

  FgtDescriptor descriptor_;
  std::vector<double> inv_factorial_;
  std::uint64_t block_size_ = 0;  // (rho+1)^d
};

std::unique_ptr<FgtFamily> make_family(double radius, std::size_t dim, int rho);

// Places the grid from the data: center at the centroid (or the supplied
// public center), radius = max distance of any point from the center. Note the
// centroid is data dependent; strict accounting should pass a public center.
std::unique_ptr<FgtFamily> make_family_for_dataset(const Dataset& dataset, int rho,
                                                   const FgtOptions& options = {});

}  // namespace lsq::fgt
