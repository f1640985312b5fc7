#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lsq {

// A single point in R^d.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  std::span<const double> view() const { return coords; }
};

inline bool all_finite(std::span<const double> v) {
  for (double c : v) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

// Immutable collection of points with uniform dimension plus the bandwidth the
// coordinates are expressed in. Storage is flat row-major so the estimator
// inner loops stream it without pointer chasing.
class Dataset {
 public:
  Dataset(std::vector<Point> points, double bandwidth)
      : Dataset(flatten(points), points.empty() ? 0 : points.front().dim(), bandwidth) {}

  Dataset(std::vector<double> flat, std::size_t dim, double bandwidth)
      : data_(std::move(flat)), dim_(dim), bandwidth_(bandwidth) {
    if (dim_ == 0) throw std::invalid_argument("dataset: dimension must be positive");
    if (data_.empty()) throw std::invalid_argument("dataset: at least one point required");
    if (data_.size() % dim_ != 0) {
      throw std::invalid_argument("dataset: flat storage size is not a multiple of the dimension");
    }
    if (!(bandwidth_ > 0.0)) throw std::invalid_argument("dataset: bandwidth must be positive");
    if (!all_finite(data_)) throw std::invalid_argument("dataset: coordinates must be finite");
  }

  std::size_t size() const { return data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  double bandwidth() const { return bandwidth_; }

  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(data_.data() + i * dim_, dim_);
  }

  Point point_copy(std::size_t i) const {
    auto p = point(i);
    return Point(std::vector<double>(p.begin(), p.end()));
  }

  std::span<const double> flat() const { return data_; }

 private:
  static std::vector<double> flatten(const std::vector<Point>& points) {
    std::vector<double> out;
    if (points.empty()) return out;
    const std::size_t d = points.front().dim();
    out.reserve(points.size() * d);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].dim() != d) {
        throw std::invalid_argument("dataset: point " + std::to_string(i) + " has " +
                                    std::to_string(points[i].dim()) + " coordinates, expected " +
                                    std::to_string(d));
      }
      out.insert(out.end(), points[i].coords.begin(), points[i].coords.end());
    }
    return out;
  }

  std::vector<double> data_;
  std::size_t dim_;
  double bandwidth_;
};

}  // namespace lsq
