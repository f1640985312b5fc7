#pragma once

#include <cstdint>
#include <span>

#include "lsq/descriptor.hpp"
#include "lsq/point.hpp"
#include "lsq/rng.hpp"
#include "lsq/sparse.hpp"

namespace lsq {

enum class FamilyTag : std::uint8_t {
  kRff = 0,
  kFgt = 1,
  kLsh = 2,
  kBernstein = 3,
  kNoisySample = 4,
};

const char* family_tag_name(FamilyTag tag);

// (Q, R, S): coordinate count, per-coordinate range bound, sparsity bound.
struct LsqParams {
  std::uint64_t quantization = 0;
  double range = 0.0;
  std::uint64_t sparsity = 0;
};

// A distribution over function pairs (f, g) mapping R^d into [-R, R]^Q with at
// most S nonzero coordinates, whose expected inner product f(x)^T g(y)
// approximates a kernel. Implementations are immutable and safe to share
// across threads.
class LsqFamily {
 public:
  virtual ~LsqFamily() = default;

  virtual FamilyTag tag() const = 0;
  virtual std::size_t dim() const = 0;
  virtual LsqParams params() const = 0;

  // Draws one (f, g) pair.
  virtual PairDescriptor sample(SplitRng& rng) const = 0;

  // Writes f(x) / g(y) into `out` (cleared first, dim set to Q).
  virtual void eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                           SparseVector& out) const = 0;
  virtual void eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                           SparseVector& out) const = 0;

  // Bound on ||f(x)||_1 over all x; drives the noise calibration. Defaults to
  // R*S; families with per-coordinate range information tighten it.
  virtual double f_range_l1() const {
    const LsqParams p = params();
    return p.range * static_cast<double>(p.sparsity);
  }

  // Adds mean_{x in dataset} f(x) into `accum` (length Q, caller-zeroed).
  // The default loops eval_f_into; hot families override with fused loops.
  virtual void accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                                 std::span<double> accum) const;

  SparseVector eval_f(const PairDescriptor& desc, const Point& x) const;
  SparseVector eval_g(const PairDescriptor& desc, const Point& y) const;

 protected:
  void check_dim(std::span<const double> p, const char* what) const;
};

}  // namespace lsq
