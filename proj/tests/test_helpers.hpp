#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "lsq/kernel.hpp"
#include "lsq/point.hpp"
#include "lsq/rng.hpp"

namespace lsq::testutil {

inline Point random_point(SplitRng& rng, std::size_t dim, double lo = -3.0, double hi = 3.0) {
  std::vector<double> c(dim);
  for (auto& v : c) v = rng.uniform(lo, hi);
  return Point(std::move(c));
}

inline Dataset random_dataset(SplitRng& rng, std::size_t n, std::size_t dim, double lo = -3.0,
                              double hi = 3.0, double bandwidth = 1.0) {
  std::vector<double> flat(n * dim);
  for (auto& v : flat) v = rng.uniform(lo, hi);
  return Dataset(std::move(flat), dim, bandwidth);
}

// Independent KDE path for cross-checking exact_kde: reverse iteration order,
// explicit kernel formulas, Kahan-compensated long double accumulation.
inline double kde_reference(const Dataset& dataset, const KernelSpec& spec,
                            std::span<const double> y) {
  long double sum = 0.0L;
  long double comp = 0.0L;
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dim();
  for (std::size_t ii = n; ii-- > 0;) {
    const auto x = dataset.point(ii);
    long double k = 0.0L;
    switch (spec.kind) {
      case KernelKind::kGaussian: {
        long double sq = 0.0L;
        for (std::size_t j = 0; j < d; ++j) {
          const long double t = (static_cast<long double>(x[j]) - y[j]) / spec.bandwidth;
          sq += t * t;
        }
        k = std::exp(-static_cast<double>(sq));
        break;
      }
      case KernelKind::kLaplacian: {
        long double l1 = 0.0L;
        for (std::size_t j = 0; j < d; ++j) {
          l1 += std::abs(static_cast<long double>(x[j]) - y[j]) / spec.bandwidth;
        }
        k = std::exp(-static_cast<double>(l1));
        break;
      }
      case KernelKind::kCauchy: {
        long double prod = 1.0L;
        for (std::size_t j = 0; j < d; ++j) {
          const long double t = (static_cast<long double>(x[j]) - y[j]) / spec.bandwidth;
          prod *= (spec.normalized_cauchy ? 1.0L : 2.0L) / (1.0L + t * t);
        }
        k = prod;
        break;
      }
    }
    const long double term = k - comp;
    const long double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return static_cast<double>(sum / static_cast<long double>(n));
}

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace lsq::testutil
