#include "lsq/family.hpp"

#include <stdexcept>
#include <string>

namespace lsq {

const char* family_tag_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::kRff:
      return "rff";
    case FamilyTag::kFgt:
      return "fgt";
    case FamilyTag::kLsh:
      return "lsh";
    case FamilyTag::kBernstein:
      return "bernstein";
    case FamilyTag::kNoisySample:
      return "noisysample";
  }
  return "unknown";
}

void LsqFamily::accumulate_mean_f(const PairDescriptor& desc, const Dataset& dataset,
                                  std::span<double> accum) const {
  SparseVector scratch;
  const double inv_n = 1.0 / static_cast<double>(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    eval_f_into(desc, dataset.point(i), scratch);
    for (const auto& e : scratch.entries) {
      accum[e.index] += e.value * inv_n;
    }
  }
}

SparseVector LsqFamily::eval_f(const PairDescriptor& desc, const Point& x) const {
  SparseVector out;
  eval_f_into(desc, x.view(), out);
  return out;
}

SparseVector LsqFamily::eval_g(const PairDescriptor& desc, const Point& y) const {
  SparseVector out;
  eval_g_into(desc, y.view(), out);
  return out;
}

void LsqFamily::check_dim(std::span<const double> p, const char* what) const {
  if (p.size() != dim()) {
    throw std::invalid_argument(std::string(what) + ": point dimension " + std::to_string(p.size()) +
                                " does not match family dimension " + std::to_string(dim()));
  }
}

}  // namespace lsq
