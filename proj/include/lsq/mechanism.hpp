#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsq/family.hpp"
#include "lsq/kernel.hpp"

namespace lsq {

// Inputs of the private release: privacy budget, repetition count I, number of
// median groups J (J must divide I), and the seed all randomness derives from.
struct MechanismConfig {
  double epsilon = 1.0;
  std::uint32_t repetitions = 1;
  std::uint32_t median_groups = 1;
  std::uint64_t rng_seed = 0;
  int threads = 1;
  std::uint64_t memory_cap_bytes = 2ull * 1024 * 1024 * 1024;
};

// The public artifact returned by the curator: I pair descriptors plus I noisy
// aggregate vectors of length Q, and the metadata a client needs to evaluate
// estimates. Immutable once built.
struct ReleasedFunction {
  FamilyTag family_tag = FamilyTag::kRff;
  KernelSpec kernel;  // original bandwidth; clients rescale queries with it
  std::uint32_t dim = 0;
  double epsilon = 0.0;
  std::uint32_t repetitions = 0;
  std::uint32_t median_groups = 1;
  std::uint64_t quantization = 0;
  double noise_scale = 0.0;
  bool clamp_default = false;
  std::vector<PairDescriptor> descriptors;
  std::vector<double> noisy_aggregates;  // repetitions x quantization, row-major

  std::span<const double> aggregate(std::size_t i) const {
    return std::span<const double>(noisy_aggregates.data() + i * quantization, quantization);
  }
};

// Laplace scale I * f_l1 / (epsilon * n) added to every aggregate coordinate.
double noise_scale(std::uint64_t repetitions, double f_range_l1, double epsilon, std::uint64_t n);

// n + Laplace(1/epsilon); used only for parameter auto-tuning rules, which
// must not look at the true count. May be negative; consumers floor at 1.
double privatize_count(std::uint64_t n, double epsilon, SplitRng& rng);

// Runs the curator: samples I pairs, accumulates the dataset mean of f per
// pair, and adds i.i.d. Laplace noise to all Q coordinates of every aggregate
// (empty coordinates included). The dataset must already be scaled to unit
// bandwidth; `kernel` records provenance for the client.
ReleasedFunction curator_release(const Dataset& dataset, const LsqFamily& family,
                                 const KernelSpec& kernel, const MechanismConfig& config);

// Client side: median over J groups of mean aggregate/feature inner products.
// Estimates are not clamped to [0,1] unless `clamp` is set.
double client_estimate(const ReleasedFunction& released, const LsqFamily& family,
                       std::span<const double> y, bool clamp = false);
double client_estimate(const ReleasedFunction& released, const LsqFamily& family, const Point& y,
                       bool clamp = false);

// Versioned binary container (see README for the layout). The JSON export in
// release_io.hpp mirrors the same fields.
std::vector<std::uint8_t> serialize_released(const ReleasedFunction& released);
ReleasedFunction deserialize_released(std::span<const std::uint8_t> bytes);

namespace internal {

// Noise-free release used by tests and by the benchmark oracle mode. Not
// reachable from the command line tools; oracle estimates are never written
// to release files.
ReleasedFunction release_without_noise(const Dataset& dataset, const LsqFamily& family,
                                       const KernelSpec& kernel, const MechanismConfig& config);

}  // namespace internal

}  // namespace lsq
