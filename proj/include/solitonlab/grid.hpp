#pragma once

#include <cmath>
#include <cstddef>

#include "solitonlab/errors.hpp"

namespace solitonlab {

// Closed uniform grid: n points from start to stop inclusive, n >= 2.
struct Grid1D {
  double start = 0.0;
  double stop = 0.0;
  std::size_t n = 0;

  double spacing() const { return (stop - start) / static_cast<double>(n - 1); }

  // Endpoints are returned exactly; interior points come from one fused
  // multiply so the grid is reproducible across call sites.
  double value(std::size_t i) const {
    if (i == 0) return start;
    if (i + 1 == n) return stop;
    return start + spacing() * static_cast<double>(i);
  }
};

inline Grid1D uniform_grid(double start, double stop, std::size_t n) {
  if (!(std::isfinite(start) && std::isfinite(stop)))
    throw InvalidRangeError("uniform_grid: endpoints must be finite");
  if (!(stop > start))
    throw InvalidRangeError("uniform_grid: stop must exceed start");
  if (n < 2)
    throw InvalidRangeError("uniform_grid: need at least two points");
  return Grid1D{start, stop, n};
}

}  // namespace solitonlab
