#pragma once

#include <memory>

#include "lsq/family.hpp"
#include "lsq/kernel.hpp"

namespace lsq::rff {

// Frequency scale applied inside the cosine. The Gaussian kernel convention
// used throughout (k = exp(-||x-y||^2)) needs sqrt(2); the Laplacian and
// Cauchy features use the plain Bochner form.
double frequency_scale(KernelKind kind);

// Draws (omega, beta): omega ~ N(0, I_d) for the Gaussian kernel, i.i.d.
// standard Cauchy coordinates for the Laplacian kernel, i.i.d. standard
// Laplace coordinates for the Cauchy kernel; beta ~ Uniform[0, 2*pi).
RffDescriptor sample(KernelKind kind, std::size_t dim, SplitRng& rng);

// sqrt(2) * cos(scale * omega^T p + beta).
double feature(const RffDescriptor& desc, KernelKind kind, std::span<const double> p);

// Exact (1, sqrt(2), 1) quantization family; f and g are the same feature.
// For the Cauchy kernel the expectation reproduces the normalized variant
// (the one bounded by 1).
class RffFamily final : public LsqFamily {
 public:
  RffFamily(KernelKind kind, std::size_t dim);

  FamilyTag tag() const override { return FamilyTag::kRff; }
  std::size_t dim() const override { return dim_; }
  LsqParams params() const override;
  PairDescriptor sample(SplitRng& rng) const override;
  void eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                   SparseVector& out) const override;
  void eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                   SparseVector& out) const override;
  void accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                         std::span<double> accum) const override;

  KernelKind kernel_kind() const { return kind_; }

 private:
  KernelKind kind_;
  std::size_t dim_;
};

std::unique_ptr<RffFamily> make_family(const KernelSpec& kernel, std::size_t dim);

}  // namespace lsq::rff
