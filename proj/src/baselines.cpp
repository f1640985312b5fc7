#include "lsq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lsq::baselines {

namespace {

NoisySampleRelease noisy_sample_impl(const Dataset& dataset, const KernelSpec& kernel,
                                     double epsilon, std::uint32_t sample_size, SplitRng& rng,
                                     bool add_noise) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("noisy_sample: epsilon must be positive");
  if (sample_size == 0) throw std::invalid_argument("noisy_sample: sample size must be positive");
  if (dataset.size() <= sample_size) {
    throw std::invalid_argument("noisy_sample: dataset of " + std::to_string(dataset.size()) +
                                " points is too small for a held-out sample of " +
                                std::to_string(sample_size));
  }

  // Fisher-Yates prefix: the first sample_size slots become the held-out set.
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::uint32_t i = 0; i < sample_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_double() * (order.size() - i));
    std::swap(order[i], order[j]);
  }

  std::vector<double> rest;
  rest.reserve((dataset.size() - sample_size) * dataset.dim());
  for (std::size_t i = sample_size; i < order.size(); ++i) {
    const auto p = dataset.point(order[i]);
    rest.insert(rest.end(), p.begin(), p.end());
  }
  Dataset remaining(std::move(rest), dataset.dim(), dataset.bandwidth());

  double mean = 0.0;
  for (std::uint32_t i = 0; i < sample_size; ++i) {
    mean += exact_kde(remaining, kernel, dataset.point(order[i]));
  }
  mean /= static_cast<double>(sample_size);

  NoisySampleRelease out;
  out.sample_size = sample_size;
  out.epsilon = epsilon;
  out.n_remaining = remaining.size();
  out.dim = static_cast<std::uint32_t>(dataset.dim());
  out.kernel = kernel;
  out.value = mean + (add_noise ? rng.laplace(out.noise_scale()) : 0.0);
  return out;
}

BernsteinRelease bernstein_impl(const Dataset& dataset, const KernelSpec& kernel, double epsilon,
                                std::uint32_t order, SplitRng& rng, bool add_noise,
                                std::uint64_t memory_cap_bytes) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("bernstein: epsilon must be positive");
  if (order < 1) throw std::invalid_argument("bernstein: lattice order must be at least 1");
  if (order > kMaxBernsteinOrder) {
    throw std::invalid_argument("bernstein: order " + std::to_string(order) + " exceeds the cap of " +
                                std::to_string(kMaxBernsteinOrder));
  }

  const std::size_t d = dataset.dim();
  std::uint64_t nodes = 1;
  for (std::size_t j = 0; j < d; ++j) {
    const std::uint64_t next = nodes * (order + 1);
    if (next / (order + 1) != nodes || next > memory_cap_bytes / sizeof(double)) {
      throw std::invalid_argument("bernstein: (k+1)^d lattice exceeds the memory cap; reduce k or d");
    }
    nodes = next;
  }

  BernsteinRelease out;
  out.order = order;
  out.dim = static_cast<std::uint32_t>(d);
  out.epsilon = epsilon;
  out.kernel = kernel;
  out.noise_scale = static_cast<double>(nodes) / (epsilon * static_cast<double>(dataset.size()));

  // Domain box: per-axis data range with 1% padding on each side.
  out.domain_box.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = dataset.point(0)[j];
    double hi = lo;
    for (std::size_t i = 1; i < dataset.size(); ++i) {
      lo = std::min(lo, dataset.point(i)[j]);
      hi = std::max(hi, dataset.point(i)[j]);
    }
    double pad = 0.01 * (hi - lo);
    if (pad == 0.0) pad = 0.5;
    out.domain_box[j] = {lo - pad, hi + pad};
  }

  out.noisy_values.resize(nodes);
  std::vector<double> node(d);
  std::vector<std::uint32_t> idx(d, 0);
  for (std::uint64_t flat = 0; flat < nodes; ++flat) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto [lo, hi] = out.domain_box[j];
      node[j] = lo + (hi - lo) * static_cast<double>(idx[j]) / static_cast<double>(order);
    }
    out.noisy_values[flat] = exact_kde(dataset, kernel, std::span<const double>(node));

    std::size_t j = d;
    while (j > 0) {
      if (++idx[j - 1] <= order) break;
      idx[j - 1] = 0;
      --j;
    }
  }
  if (add_noise) {
    for (double& v : out.noisy_values) v += rng.laplace(out.noise_scale);
  }
  return out;
}

}  // namespace

NoisySampleRelease noisy_sample_release(const Dataset& dataset, const KernelSpec& kernel,
                                        double epsilon, std::uint32_t sample_size, SplitRng& rng) {
  return noisy_sample_impl(dataset, kernel, epsilon, sample_size, rng, /*add_noise=*/true);
}

double noisy_sample_estimate(const NoisySampleRelease& release, const Point& y) {
  if (y.dim() != release.dim) {
    throw std::invalid_argument("noisy_sample: query dimension does not match the release");
  }
  return release.value;
}

BernsteinRelease bernstein_release(const Dataset& dataset, const KernelSpec& kernel, double epsilon,
                                   std::uint32_t order, SplitRng& rng,
                                   std::uint64_t memory_cap_bytes) {
  return bernstein_impl(dataset, kernel, epsilon, order, rng, /*add_noise=*/true, memory_cap_bytes);
}

std::vector<double> bernstein_basis(double u, std::uint32_t order) {
  std::vector<double> basis(order + 1, 0.0);
  if (u <= 0.0) {
    basis[0] = 1.0;
    return basis;
  }
  if (u >= 1.0) {
    basis[order] = 1.0;
    return basis;
  }
  const double log_u = std::log(u);
  const double log_1mu = std::log1p(-u);
  const double log_k_fact = std::lgamma(static_cast<double>(order) + 1.0);
  for (std::uint32_t i = 0; i <= order; ++i) {
    const double log_binom = log_k_fact - std::lgamma(static_cast<double>(i) + 1.0) -
                             std::lgamma(static_cast<double>(order - i) + 1.0);
    basis[i] = std::exp(log_binom + i * log_u + (order - i) * log_1mu);
  }
  return basis;
}

namespace {

// Contracts the lattice tensor with per-axis basis vectors, last axis first.
double contract_lattice(std::span<const double> values, std::uint32_t k,
                        const std::vector<std::vector<double>>& basis) {
  std::vector<double> buf(values.begin(), values.end());
  std::size_t len = buf.size();
  for (std::size_t j = basis.size(); j-- > 0;) {
    const auto& b = basis[j];
    const std::size_t blocks = len / (k + 1);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      double acc = 0.0;
      const double* src = buf.data() + blk * (k + 1);
      for (std::uint32_t i = 0; i <= k; ++i) acc += src[i] * b[i];
      buf[blk] = acc;
    }
    len = blocks;
  }
  return buf[0];
}

// Applies the per-axis node matrix M[mu][nu] = b_nu(mu/k) along every axis,
// producing the lattice values of B applied to the input lattice.
std::vector<double> apply_operator_on_lattice(std::span<const double> values, std::uint32_t k,
                                              std::size_t dim) {
  const std::size_t w = k + 1;
  std::vector<std::vector<double>> node_basis(w);
  for (std::uint32_t mu = 0; mu <= k; ++mu) {
    node_basis[mu] = bernstein_basis(static_cast<double>(mu) / k, k);
  }
  std::vector<double> cur(values.begin(), values.end());
  std::vector<double> next(cur.size());
  std::size_t inner = 1;  // product of sizes of axes to the right
  for (std::size_t axis = dim; axis-- > 0;) {
    const std::size_t outer = cur.size() / (inner * w);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        const double* src = cur.data() + o * w * inner + in;
        double* dst = next.data() + o * w * inner + in;
        for (std::size_t mu = 0; mu < w; ++mu) {
          double acc = 0.0;
          const auto& b = node_basis[mu];
          for (std::size_t nu = 0; nu < w; ++nu) acc += b[nu] * src[nu * inner];
          dst[mu * inner] = acc;
        }
      }
    }
    cur.swap(next);
    inner *= w;
  }
  return cur;
}

}  // namespace

BernsteinEvaluator::BernsteinEvaluator(const BernsteinRelease& release) : release_(release) {
  const std::uint32_t h =
      std::clamp<std::uint32_t>(release.iteration_order, 1, kMaxBernsteinIterations);
  // I - (I - B)^h expands to sum_{i=1..h} (-1)^(i+1) C(h, i) B^i; level i-1
  // stores B^(i-1) applied to the lattice, contracted with one more B at
  // query time.
  levels_.push_back(std::vector<double>(release.noisy_values));
  for (std::uint32_t i = 1; i < h; ++i) {
    levels_.push_back(apply_operator_on_lattice(levels_.back(), release.order, release.dim));
  }
  double binom = static_cast<double>(h);
  for (std::uint32_t i = 1; i <= h; ++i) {
    coefficients_.push_back((i % 2 == 1 ? 1.0 : -1.0) * binom);
    binom = binom * (h - i) / (i + 1);
  }
}

BernsteinEstimate BernsteinEvaluator::operator()(const Point& y) const {
  if (y.dim() != release_.dim) {
    throw std::invalid_argument("bernstein: query dimension does not match the release");
  }
  const std::size_t d = release_.dim;
  const std::uint32_t k = release_.order;

  BernsteinEstimate result;
  std::vector<std::vector<double>> basis(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto [lo, hi] = release_.domain_box[j];
    double u = (y.coords[j] - lo) / (hi - lo);
    if (u < 0.0 || u > 1.0) {
      result.clamped_to_boundary = true;
      u = std::clamp(u, 0.0, 1.0);
    }
    basis[j] = bernstein_basis(u, k);
  }

  double value = 0.0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    value += coefficients_[i] * contract_lattice(levels_[i], k, basis);
  }
  result.value = value;
  return result;
}

BernsteinEstimate bernstein_estimate(const BernsteinRelease& release, const Point& y) {
  return BernsteinEvaluator(release)(y);
}

namespace internal {

NoisySampleRelease noisy_sample_without_noise(const Dataset& dataset, const KernelSpec& kernel,
                                              double epsilon, std::uint32_t sample_size,
                                              SplitRng& rng) {
  return noisy_sample_impl(dataset, kernel, epsilon, sample_size, rng, /*add_noise=*/false);
}

BernsteinRelease bernstein_without_noise(const Dataset& dataset, const KernelSpec& kernel,
                                         double epsilon, std::uint32_t order, SplitRng& rng) {
  return bernstein_impl(dataset, kernel, epsilon, order, rng, /*add_noise=*/false,
                        2ull * 1024 * 1024 * 1024);
}

}  // namespace internal

}  // namespace lsq::baselines
