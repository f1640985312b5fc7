#pragma once

#include <memory>
#include <string>
#include <variant>

#include "lsq/baselines.hpp"
#include "lsq/mechanism.hpp"

namespace lsq {

// Rebuilds the evaluation family a released function was produced with, from
// the metadata stored in the container.
std::unique_ptr<LsqFamily> rebuild_family(const ReleasedFunction& released);

// Any release artifact the CLI can write and query.
using AnyRelease =
    std::variant<ReleasedFunction, baselines::BernsteinRelease, baselines::NoisySampleRelease>;

std::vector<std::uint8_t> serialize_any(const AnyRelease& release);
AnyRelease deserialize_any(std::span<const std::uint8_t> bytes);

void save_release(const AnyRelease& release, const std::string& path);
AnyRelease load_release(const std::string& path);

// Evaluates a release on a query given in original (unscaled) coordinates;
// rescales by the recorded bandwidth first.
double estimate_any(const AnyRelease& release, const Point& query, bool clamp);

// Same, with the per-release preparation (family rebuild, lattice iteration)
// hoisted out of the query loop.
class ReleaseEvaluator {
 public:
  explicit ReleaseEvaluator(const AnyRelease& release);
  double operator()(const Point& query, bool clamp) const;

 private:
  const AnyRelease& release_;
  std::unique_ptr<LsqFamily> family_;
  std::unique_ptr<baselines::BernsteinEvaluator> bernstein_;
};

double release_epsilon(const AnyRelease& release);
std::uint32_t release_dim(const AnyRelease& release);
bool release_clamp_default(const AnyRelease& release);

// Debug mirror of the binary container.
std::string release_to_json(const AnyRelease& release);

}  // namespace lsq
