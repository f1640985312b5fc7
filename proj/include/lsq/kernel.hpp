#pragma once

#include <cstdint>
#include <span>

#include "lsq/point.hpp"

namespace lsq {

enum class KernelKind : std::uint8_t { kGaussian = 0, kLaplacian = 1, kCauchy = 2 };

const char* kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

// Kernel selection plus bandwidth. The Cauchy kernel is implemented as the
// per-axis product 2/(1 + t^2) by default; `normalized_cauchy` switches to
// 1/(1 + t^2), which is the variant bounded by 1 (and the one the Fourier
// feature family reproduces in expectation).
struct KernelSpec {
  KernelKind kind = KernelKind::kGaussian;
  double bandwidth = 1.0;
  bool normalized_cauchy = false;

  KernelSpec scaled_to_unit() const { return {kind, 1.0, normalized_cauchy}; }
};

// Kernel value for a pair of points. Throws on dimension mismatch or
// non-finite coordinates.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);
double kernel_eval(const KernelSpec& spec, const Point& x, const Point& y);

namespace detail {
// Unchecked kernel evaluation for pre-validated inputs.
double kernel_raw(const KernelSpec& spec, const double* x, const double* y, std::size_t dim);
}  // namespace detail

// Mean kernel value of `y` against every dataset point.
double exact_kde(const Dataset& dataset, const KernelSpec& spec, std::span<const double> y);
double exact_kde(const Dataset& dataset, const KernelSpec& spec, const Point& y);

// Divides every coordinate by the bandwidth so downstream code can assume
// bandwidth 1. Kernel values are invariant under this rescaling.
Dataset scale_to_unit_bandwidth(const Dataset& dataset, const KernelSpec& spec);

// Same rescaling for a query point.
Point scale_point(const Point& p, double bandwidth);

}  // namespace lsq
