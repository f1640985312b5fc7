#include "lsq/mechanism.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lsq {

double noise_scale(std::uint64_t repetitions, double f_range_l1, double epsilon, std::uint64_t n) {
  if (repetitions == 0) throw std::invalid_argument("noise_scale: repetitions must be positive");
  if (!(f_range_l1 > 0.0)) throw std::invalid_argument("noise_scale: f_range_l1 must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("noise_scale: epsilon must be positive");
  if (n == 0) throw std::invalid_argument("noise_scale: dataset size must be positive");
  return static_cast<double>(repetitions) * f_range_l1 / (epsilon * static_cast<double>(n));
}

double privatize_count(std::uint64_t n, double epsilon, SplitRng& rng) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("privatize_count: epsilon must be positive");
  return static_cast<double>(n) + rng.laplace(1.0 / epsilon);
}

static void validate_config(const MechanismConfig& config) {
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("mechanism: epsilon must be positive");
  if (config.repetitions == 0) throw std::invalid_argument("mechanism: repetitions must be positive");
  if (config.median_groups == 0) throw std::invalid_argument("mechanism: median_groups must be positive");
  if (config.repetitions % config.median_groups != 0) {
    throw std::invalid_argument("mechanism: median_groups (" + std::to_string(config.median_groups) +
                                ") must divide repetitions (" + std::to_string(config.repetitions) + ")");
  }
}

// Fills repetition i from its own derived stream: descriptor first, then mean
// accumulation, then one Laplace draw per coordinate. Each repetition is fully
// determined by (seed, i), so any execution order yields identical output.
static void run_repetition(const Dataset& dataset, const LsqFamily& family, const SplitRng& base,
                           std::uint32_t i, double scale, bool add_noise, PairDescriptor& desc,
                           std::span<double> row) {
  SplitRng rng = base.derive(i);
  desc = family.sample(rng);
  std::fill(row.begin(), row.end(), 0.0);
  family.accumulate_mean_f(desc, dataset, row);
  if (add_noise) {
    for (double& v : row) v += rng.laplace(scale);
  }
}

static ReleasedFunction release_impl(const Dataset& dataset, const LsqFamily& family,
                                     const KernelSpec& kernel, const MechanismConfig& config,
                                     bool add_noise) {
  validate_config(config);
  if (dataset.dim() != family.dim()) {
    throw std::invalid_argument("curator_release: dataset dimension " + std::to_string(dataset.dim()) +
                                " does not match family dimension " + std::to_string(family.dim()));
  }

  const std::uint64_t q = family.params().quantization;
  const std::uint64_t rows = config.repetitions;
  if (q == 0) throw std::invalid_argument("curator_release: family reports zero coordinates");
  if (q > config.memory_cap_bytes / sizeof(double) / rows) {
    throw std::invalid_argument(
        "curator_release: aggregate matrix of " + std::to_string(rows) + " x " + std::to_string(q) +
        " doubles exceeds the memory cap; reduce the repetition count or the family size");
  }

  ReleasedFunction out;
  out.family_tag = family.tag();
  out.kernel = kernel;
  out.dim = static_cast<std::uint32_t>(dataset.dim());
  out.epsilon = config.epsilon;
  out.repetitions = config.repetitions;
  out.median_groups = config.median_groups;
  out.quantization = q;
  out.noise_scale = noise_scale(rows, family.f_range_l1(), config.epsilon, dataset.size());
  out.descriptors.resize(rows);
  out.noisy_aggregates.assign(rows * q, 0.0);

  const SplitRng base(config.rng_seed);
  auto row_span = [&](std::uint32_t i) {
    return std::span<double>(out.noisy_aggregates.data() + static_cast<std::uint64_t>(i) * q, q);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = config.threads <= 0 ? hw : static_cast<unsigned>(config.threads);
  if (workers <= 1 || rows == 1) {
    for (std::uint32_t i = 0; i < rows; ++i) {
      run_repetition(dataset, family, base, i, out.noise_scale, add_noise, out.descriptors[i],
                     row_span(i));
    }
  } else {
    // Repetitions write disjoint rows and use disjoint derived streams, so the
    // parallel result is bit-identical to the sequential one.
    std::vector<std::thread> pool;
    const unsigned use = std::min<unsigned>(workers, static_cast<unsigned>(rows));
    pool.reserve(use);
    for (unsigned t = 0; t < use; ++t) {
      pool.emplace_back([&, t]() {
        for (std::uint64_t i = t; i < rows; i += use) {
          const auto idx = static_cast<std::uint32_t>(i);
          run_repetition(dataset, family, base, idx, out.noise_scale, add_noise,
                         out.descriptors[idx], row_span(idx));
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

ReleasedFunction curator_release(const Dataset& dataset, const LsqFamily& family,
                                 const KernelSpec& kernel, const MechanismConfig& config) {
  return release_impl(dataset, family, kernel, config, /*add_noise=*/true);
}

namespace internal {

ReleasedFunction release_without_noise(const Dataset& dataset, const LsqFamily& family,
                                       const KernelSpec& kernel, const MechanismConfig& config) {
  return release_impl(dataset, family, kernel, config, /*add_noise=*/false);
}

}  // namespace internal

static double median_inplace(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double client_estimate(const ReleasedFunction& released, const LsqFamily& family,
                       std::span<const double> y, bool clamp) {
  if (y.size() != family.dim() || family.dim() != released.dim) {
    throw std::invalid_argument("client_estimate: dimension mismatch between query, family and release");
  }
  const std::uint32_t groups = released.median_groups;
  const std::uint32_t per_group = released.repetitions / groups;

  std::vector<double> means(groups, 0.0);
  SparseVector feat;
  for (std::uint32_t j = 0; j < groups; ++j) {
    double sum = 0.0;
    for (std::uint32_t k = 0; k < per_group; ++k) {
      const std::uint32_t i = j * per_group + k;
      family.eval_g_into(released.descriptors[i], y, feat);
      const double* row = released.noisy_aggregates.data() +
                          static_cast<std::uint64_t>(i) * released.quantization;
      double dot = 0.0;
      for (const auto& e : feat.entries) dot += row[e.index] * e.value;
      sum += dot;
    }
    means[j] = sum / static_cast<double>(per_group);
  }
  double est = median_inplace(means);
  if (clamp) est = std::clamp(est, 0.0, 1.0);
  return est;
}

double client_estimate(const ReleasedFunction& released, const LsqFamily& family, const Point& y,
                       bool clamp) {
  return client_estimate(released, family, y.view(), clamp);
}

}  // namespace lsq
