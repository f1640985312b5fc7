#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lsq/kernel.hpp"
#include "lsq/rng.hpp"

namespace lsq::baselines {

// Constant-answer baseline: the noisy mean KDE of a held-out sample. Useful
// as a floor that any non-degenerate mechanism should beat.
struct NoisySampleRelease {
  double value = 0.0;
  std::uint32_t sample_size = 0;
  double epsilon = 0.0;
  std::uint64_t n_remaining = 0;
  std::uint32_t dim = 0;
  KernelSpec kernel;

  double noise_scale() const { return 1.0 / (epsilon * static_cast<double>(n_remaining)); }
};

// Samples `sample_size` points without replacement, averages their exact KDEs
// with respect to the remaining points, and adds Laplace(1/(epsilon * n_rem)).
NoisySampleRelease noisy_sample_release(const Dataset& dataset, const KernelSpec& kernel,
                                        double epsilon, std::uint32_t sample_size, SplitRng& rng);

double noisy_sample_estimate(const NoisySampleRelease& release, const Point& y);

// Polynomial-interpolation baseline: noisy exact KDE values on a (k+1)^d
// lattice over the unit cube, answered through the multivariate iterated
// Bernstein operator. Iteration happens entirely on the released lattice
// values, so it does not touch the privacy accounting.
struct BernsteinRelease {
  std::uint32_t order = 0;  // k
  std::uint32_t dim = 0;
  std::uint32_t iteration_order = 3;  // h in I - (I - B)^h
  double epsilon = 0.0;
  double noise_scale = 0.0;                          // (k+1)^d / (epsilon * n)
  std::vector<std::pair<double, double>> domain_box;  // per-axis (min, max)
  std::vector<double> noisy_values;                   // (k+1)^d lattice values
  KernelSpec kernel;
};

constexpr std::uint32_t kMaxBernsteinOrder = 64;
constexpr std::uint32_t kMaxBernsteinIterations = 4;

BernsteinRelease bernstein_release(const Dataset& dataset, const KernelSpec& kernel, double epsilon,
                                   std::uint32_t order, SplitRng& rng,
                                   std::uint64_t memory_cap_bytes = 2ull * 1024 * 1024 * 1024);

struct BernsteinEstimate {
  double value = 0.0;
  // Set when the query fell outside the released domain box and was clamped
  // to its boundary.
  bool clamped_to_boundary = false;
};

// Precomputes the iterated lattice levels B^i(values) once; evaluation per
// query is then one basis contraction per level.
class BernsteinEvaluator {
 public:
  explicit BernsteinEvaluator(const BernsteinRelease& release);
  BernsteinEstimate operator()(const Point& y) const;

 private:
  const BernsteinRelease& release_;
  std::vector<std::vector<double>> levels_;  // B^i applied to the lattice
  std::vector<double> coefficients_;         // signed binomials of (I-(I-B)^h)
};

BernsteinEstimate bernstein_estimate(const BernsteinRelease& release, const Point& y);

// Bernstein basis values C(k, i) u^i (1-u)^(k-i) for i = 0..k; log-space
// binomials so orders up to kMaxBernsteinOrder stay exact enough.
std::vector<double> bernstein_basis(double u, std::uint32_t order);

namespace internal {

// Noise-free variants for tests and the benchmark oracle mode.
NoisySampleRelease noisy_sample_without_noise(const Dataset& dataset, const KernelSpec& kernel,
                                              double epsilon, std::uint32_t sample_size,
                                              SplitRng& rng);
BernsteinRelease bernstein_without_noise(const Dataset& dataset, const KernelSpec& kernel,
                                         double epsilon, std::uint32_t order, SplitRng& rng);

}  // namespace internal

}  // namespace lsq::baselines
