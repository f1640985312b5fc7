#include "lsq/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsq {

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kGaussian:
      return "gaussian";
    case KernelKind::kLaplacian:
      return "laplacian";
    case KernelKind::kCauchy:
      return "cauchy";
  }
  return "unknown";
}

KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "gaussian") return KernelKind::kGaussian;
  if (name == "laplacian") return KernelKind::kLaplacian;
  if (name == "cauchy") return KernelKind::kCauchy;
  throw std::invalid_argument("unknown kernel '" + name + "' (expected gaussian, laplacian or cauchy)");
}

namespace detail {

double kernel_raw(const KernelSpec& spec, const double* x, const double* y, std::size_t dim) {
  const double inv_bw = 1.0 / spec.bandwidth;
  switch (spec.kind) {
    case KernelKind::kGaussian: {
      double sq = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double t = (x[j] - y[j]) * inv_bw;
        sq += t * t;
      }
      return std::exp(-sq);
    }
    case KernelKind::kLaplacian: {
      double l1 = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        l1 += std::abs(x[j] - y[j]) * inv_bw;
      }
      return std::exp(-l1);
    }
    case KernelKind::kCauchy: {
      const double numer = spec.normalized_cauchy ? 1.0 : 2.0;
      double prod = 1.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double t = (x[j] - y[j]) * inv_bw;
        prod *= numer / (1.0 + t * t);
      }
      return prod;
    }
  }
  throw std::logic_error("kernel_raw: unhandled kernel kind");
}

}  // namespace detail

static void check_pair(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.empty()) throw std::invalid_argument("kernel_eval: empty points");
  if (!(spec.bandwidth > 0.0)) throw std::invalid_argument("kernel_eval: bandwidth must be positive");
  if (!all_finite(x) || !all_finite(y)) {
    throw std::invalid_argument("kernel_eval: coordinates must be finite");
  }
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  check_pair(spec, x, y);
  return detail::kernel_raw(spec, x.data(), y.data(), x.size());
}

double kernel_eval(const KernelSpec& spec, const Point& x, const Point& y) {
  return kernel_eval(spec, x.view(), y.view());
}

double exact_kde(const Dataset& dataset, const KernelSpec& spec, std::span<const double> y) {
  if (y.size() != dataset.dim()) {
    throw std::invalid_argument("exact_kde: query dimension " + std::to_string(y.size()) +
                                " does not match dataset dimension " + std::to_string(dataset.dim()));
  }
  if (!(spec.bandwidth > 0.0)) throw std::invalid_argument("exact_kde: bandwidth must be positive");
  if (!all_finite(y)) throw std::invalid_argument("exact_kde: query coordinates must be finite");

  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dim();
  const double* data = dataset.flat().data();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += detail::kernel_raw(spec, data + i * d, y.data(), d);
  }
  return sum / static_cast<double>(n);
}

double exact_kde(const Dataset& dataset, const KernelSpec& spec, const Point& y) {
  return exact_kde(dataset, spec, y.view());
}

Dataset scale_to_unit_bandwidth(const Dataset& dataset, const KernelSpec& spec) {
  if (!(spec.bandwidth > 0.0)) {
    throw std::invalid_argument("scale_to_unit_bandwidth: bandwidth must be positive");
  }
  const double inv_bw = 1.0 / spec.bandwidth;
  std::vector<double> flat(dataset.flat().begin(), dataset.flat().end());
  for (double& v : flat) v *= inv_bw;
  return Dataset(std::move(flat), dataset.dim(), 1.0);
}

Point scale_point(const Point& p, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("scale_point: bandwidth must be positive");
  Point out = p;
  for (double& v : out.coords) v /= bandwidth;
  return out;
}

}  // namespace lsq
