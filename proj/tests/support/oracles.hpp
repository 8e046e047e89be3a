#pragma once

// Reference implementations the tests compare the library against. They are
// deliberately naive: no shared loops with the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gridshape/labeled_grid.hpp"
#include "gridshape/moments.hpp"
#include "gridshape/raster.hpp"

namespace gridshape::testing {

/// Term-by-term similarity: 1 - (1/n) sum |a-b| / max(a,b), zero-max terms add 0.
inline double naive_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double hi = a[i] > b[i] ? a[i] : b[i];
    if (hi == 0.0L) continue;
    const long double diff = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    acc += diff / hi;
  }
  return static_cast<double>(1.0L - acc / static_cast<long double>(a.size()));
}

/// Cell-major brute force: for every cell, scan every shape pixel and count the
/// ones whose grid position falls inside it. Positions on the far edge of the
/// grid belong to the last cell. Labels come straight from the coverage rule.
inline std::vector<CellLabel> bucketing_oracle(const BinaryImage& img, const GridConfig& cfg) {
  const MomentSet m = compute_moments(img);
  const Orientation o = disambiguate_orientation(img, m);
  const auto frame = frame_coordinates(img, m, o);
  const int n = cfg.n;
  const double cs = grid_cell_size(frame, n);
  std::vector<GridPosition> pos;
  pos.reserve(frame.size());
  for (const auto& p : frame) pos.push_back(grid_position(p, cs, n));

  std::vector<CellLabel> labels(static_cast<std::size_t>(n) * n, CellLabel::kBackground);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      std::uint32_t count = 0;
      for (const auto& g : pos) {
        const bool in_col = (g.col >= c && g.col < c + 1) || (c == n - 1 && g.col >= n);
        const bool in_row = (g.row >= r && g.row < r + 1) || (r == n - 1 && g.row >= n);
        const bool low_col = c == 0 && g.col < 0;
        const bool low_row = r == 0 && g.row < 0;
        if ((in_col || low_col) && (in_row || low_row)) ++count;
      }
      const double coverage = count / (cs * cs);
      CellLabel l = CellLabel::kBackground;
      if (coverage >= cfg.interior_threshold) {
        l = CellLabel::kInterior;
      } else if (count > 0) {
        l = CellLabel::kBoundary;
      }
      labels[static_cast<std::size_t>(r) * n + c] = l;
    }
  }
  return labels;
}

/// Expected bull's-eye of a uniformly random ranking: each of the `cutoff`
/// retrieved slots holds a same-class item with probability class/total, and
/// the result is divided by the attainable min(cutoff, class) per query.
inline double random_bullseye_expectation(std::size_t classes, std::size_t per_class,
                                          std::size_t cutoff) {
  const double total = static_cast<double>(classes * per_class);
  const double expected_hits = static_cast<double>(cutoff) * per_class / total;
  return expected_hits / static_cast<double>(std::min(cutoff, per_class));
}

}  // namespace gridshape::testing
