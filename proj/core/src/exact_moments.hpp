#pragma once

// Integer moment arithmetic shared by moments.cpp and labeled_grid.cpp.
// Coordinates are scaled by the pixel count N (U = N*x - sum_x) so that every
// centroid-relative quantity is an exact integer.

#include <cstdint>
#include <utility>

#include "gridshape/moments.hpp"
#include "gridshape/raster.hpp"

namespace gridshape::detail {

__extension__ using Int128 = __int128;

struct ScaledCentral {
  Int128 a20 = 0;  // N * sum (x - cx)^2 * N ... i.e. N*sum_xx - sum_x^2
  Int128 a02 = 0;
  Int128 a11 = 0;
};

inline ScaledCentral scaled_central_moments(const MomentSet& m) {
  const Int128 n = m.count;
  ScaledCentral c;
  c.a20 = n * m.sum_xx - Int128{m.sum_x} * m.sum_x;
  c.a02 = n * m.sum_yy - Int128{m.sum_y} * m.sum_y;
  c.a11 = n * m.sum_xy - Int128{m.sum_x} * m.sum_y;
  return c;
}

/// Scaled centroid-relative coordinates rotated by -turns * 90 degrees, i.e.
/// expressed in a frame whose u-axis points along turns * 90 degrees.
inline std::pair<std::int64_t, std::int64_t> quarter_rotated(
    const MomentSet& m, int x, int y, int turns) {
  const std::int64_t U = m.count * x - m.sum_x;
  const std::int64_t V = m.count * y - m.sum_y;
  switch (((turns % 4) + 4) % 4) {
    case 1: return {V, -U};
    case 2: return {-U, -V};
    case 3: return {-V, U};
    default: return {U, V};
  }
}

struct ThirdOrder {
  Int128 s30 = 0;
  Int128 s21 = 0;
  Int128 s12 = 0;
  Int128 s03 = 0;
};

inline ThirdOrder third_order_sums(const BinaryImage& img, const MomentSet& m,
                                   int turns) {
  ThirdOrder t;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      const auto [u, v] = quarter_rotated(m, x, y, turns);
      const Int128 U = u;
      const Int128 V = v;
      t.s30 += U * U * U;
      t.s21 += U * U * V;
      t.s12 += U * V * V;
      t.s03 += V * V * V;
    }
  }
  return t;
}

}  // namespace gridshape::detail
