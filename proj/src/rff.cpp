#include "lsq/rff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lsq::rff {

namespace detail {
double sum_cos_features(const double* pts, std::size_t n, std::size_t dim, const double* omega,
                        double freq_scale, double beta);
}  // namespace detail

static constexpr double kSqrt2 = std::numbers::sqrt2;

double frequency_scale(KernelKind kind) {
  return kind == KernelKind::kGaussian ? kSqrt2 : 1.0;
}

RffDescriptor sample(KernelKind kind, std::size_t dim, SplitRng& rng) {
  RffDescriptor desc;
  desc.omega.resize(dim);
  switch (kind) {
    case KernelKind::kGaussian:
      for (auto& w : desc.omega) w = rng.normal();
      break;
    case KernelKind::kLaplacian:
      for (auto& w : desc.omega) w = rng.cauchy();
      break;
    case KernelKind::kCauchy:
      for (auto& w : desc.omega) w = rng.laplace(1.0);
      break;
  }
  desc.beta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return desc;
}

double feature(const RffDescriptor& desc, KernelKind kind, std::span<const double> p) {
  if (p.size() != desc.omega.size()) {
    throw std::invalid_argument("rff::feature: point dimension does not match frequency dimension");
  }
  const double scale = frequency_scale(kind);
  double t = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) t += desc.omega[j] * p[j];
  return kSqrt2 * std::cos(scale * t + desc.beta);
}

RffFamily::RffFamily(KernelKind kind, std::size_t dim) : kind_(kind), dim_(dim) {
  if (dim == 0) throw std::invalid_argument("rff: dimension must be positive");
}

LsqParams RffFamily::params() const { return {1, kSqrt2, 1}; }

PairDescriptor RffFamily::sample(SplitRng& rng) const { return rff::sample(kind_, dim_, rng); }

void RffFamily::eval_f_into(const PairDescriptor& desc, std::span<const double> x,
                            SparseVector& out) const {
  check_dim(x, "rff");
  const auto& d = std::get<RffDescriptor>(desc);
  out.clear();
  out.dim = 1;
  out.push(0, feature(d, kind_, x));
}

void RffFamily::eval_g_into(const PairDescriptor& desc, std::span<const double> y,
                            SparseVector& out) const {
  eval_f_into(desc, y, out);
}

void RffFamily::accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                                  std::span<double> accum) const {
  const auto& d = std::get<RffDescriptor>(desc);
  const double sum = detail::sum_cos_features(dataset.flat().data(), dataset.size(), dim_,
                                              d.omega.data(), frequency_scale(kind_), d.beta);
  accum[0] += kSqrt2 * sum / static_cast<double>(dataset.size());
}

std::unique_ptr<RffFamily> make_family(const KernelSpec& kernel, std::size_t dim) {
  return std::make_unique<RffFamily>(kernel.kind, dim);
}

}  // namespace lsq::rff
