#include "lsq/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lsq {

HeatmapGrid emit_heatmap(const std::function<double(const Point&)>& estimate,
                         const HeatmapSpec& spec) {
  if (spec.width == 0 || spec.height == 0) {
    throw std::invalid_argument("heatmap: grid dimensions must be positive");
  }
  if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0)) {
    throw std::invalid_argument("heatmap: bounding box must have positive area");
  }

  HeatmapGrid grid;
  grid.width = spec.width;
  grid.height = spec.height;
  grid.x0 = spec.x0;
  grid.y0 = spec.y0;
  grid.cell_width = (spec.x1 - spec.x0) / spec.width;
  grid.cell_height = (spec.y1 - spec.y0) / spec.height;
  grid.values.resize(static_cast<std::size_t>(spec.width) * spec.height);

  for (std::uint32_t iy = 0; iy < spec.height; ++iy) {
    for (std::uint32_t ix = 0; ix < spec.width; ++ix) {
      const Point center{grid.x0 + (ix + 0.5) * grid.cell_width,
                         grid.y0 + (iy + 0.5) * grid.cell_height};
      grid.values[iy * spec.width + ix] = estimate(center);
    }
  }
  return grid;
}

std::string heatmap_to_csv(const HeatmapGrid& grid) {
  std::ostringstream out;
  out.precision(17);
  for (std::uint32_t iy = 0; iy < grid.height; ++iy) {
    for (std::uint32_t ix = 0; ix < grid.width; ++ix) {
      if (ix > 0) out << ',';
      out << grid.at(ix, iy);
    }
    out << "\r\n";
  }
  return out.str();
}

std::string heatmap_to_pgm(const HeatmapGrid& grid) {
  const auto [lo_it, hi_it] = std::minmax_element(grid.values.begin(), grid.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double range = hi - lo;

  std::ostringstream out;
  out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
  for (std::uint32_t row = 0; row < grid.height; ++row) {
    const std::uint32_t iy = grid.height - 1 - row;
    for (std::uint32_t ix = 0; ix < grid.width; ++ix) {
      unsigned char pixel = 128;
      if (range > 0.0) {
        const double norm = (grid.at(ix, iy) - lo) / range;
        pixel = static_cast<unsigned char>(std::lround(norm * 255.0));
      }
      out.put(static_cast<char>(pixel));
    }
  }
  return out.str();
}

}  // namespace lsq
