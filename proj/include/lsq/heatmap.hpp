#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lsq/point.hpp"

namespace lsq {

struct HeatmapSpec {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double x0 = 0.0, y0 = 0.0;  // lower-left corner of the bounding box
  double x1 = 0.0, y1 = 0.0;  // upper-right corner
};

struct HeatmapGrid {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double x0 = 0.0, y0 = 0.0;
  double cell_width = 0.0, cell_height = 0.0;
  std::vector<double> values;  // row-major, row 0 at y0

  double at(std::uint32_t ix, std::uint32_t iy) const { return values[iy * width + ix]; }
};

// Evaluates `estimate` at every grid cell center. 2-d only.
HeatmapGrid emit_heatmap(const std::function<double(const Point&)>& estimate,
                         const HeatmapSpec& spec);

// RFC-4180 matrix, one row per grid row (row 0 first).
std::string heatmap_to_csv(const HeatmapGrid& grid);

// 8-bit binary PGM, min-max normalized; a flat grid maps to mid-gray. The
// image row order is flipped so larger y renders on top.
std::string heatmap_to_pgm(const HeatmapGrid& grid);

}  // namespace lsq
