#include "gridshape/labeled_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "gridshape/error.hpp"

namespace gridshape {

void GridConfig::validate() const {
  if (n < 3 || n % 2 == 0) {
    throw Error(ErrorKind::kInvalidArgument, "grid size must be odd and ≥ 3");
  }
  if (!(interior_threshold > 0.0 && interior_threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "interior threshold must lie in (0, 1]");
  }
}

LabeledGrid::LabeledGrid(GridConfig config, GridFrame frame,
                         std::vector<std::uint32_t> counts)
    : config_(config), frame_(frame), counts_(std::move(counts)) {
  config_.validate();
  const auto cells = static_cast<std::size_t>(config_.n) * config_.n;
  if (counts_.size() != cells) {
    throw Error(ErrorKind::kInvalidArgument, "grid counts must have n*n cells");
  }
  if (!(frame_.cell_size > 0.0)) {
    throw Error(ErrorKind::kDegenerateShape, "degenerate shape: zero cell size");
  }
  labels_.reserve(cells);
  for (const auto c : counts_) {
    labels_.push_back(
        classify_cell(c, frame_.cell_size, config_.interior_threshold));
  }
}

CellLabel LabeledGrid::label(int row, int col) const {
  return labels_.at(static_cast<std::size_t>(row) * n() + col);
}

std::uint32_t LabeledGrid::pixel_count(int row, int col) const {
  return counts_.at(static_cast<std::size_t>(row) * n() + col);
}

double LabeledGrid::coverage(int row, int col) const {
  return pixel_count(row, col) / (frame_.cell_size * frame_.cell_size);
}

GridPosition grid_position(const FramePoint& p, double cell_size, int n) {
  const double half = n / 2.0;
  return {p.u / cell_size + half, p.v / cell_size + half};
}

double grid_cell_size(const std::vector<FramePoint>& frame, int n) {
  double reach = 0.0;
  for (const auto& p : frame) {
    reach = std::max({reach, std::fabs(p.u), std::fabs(p.v)});
  }
  return 2.0 * reach / n;
}

CellLabel classify_cell(std::uint32_t count, double cell_size,
                        double interior_threshold) {
  if (count == 0) return CellLabel::kBackground;
  const double coverage = count / (cell_size * cell_size);
  return coverage >= interior_threshold ? CellLabel::kInterior
                                        : CellLabel::kBoundary;
}

LabeledGrid build_grid(const BinaryImage& img, const MomentSet& m,
                       const Orientation& orientation, const GridConfig& cfg) {
  cfg.validate();
  const auto frame = frame_coordinates(img, m, orientation);
  if (frame.empty()) {
    throw Error(ErrorKind::kEmptyShape, "empty shape: nothing to grid");
  }
  const int n = cfg.n;
  const double cell = grid_cell_size(frame, n);
  if (!(cell > 0.0)) {
    throw Error(ErrorKind::kDegenerateShape,
                "degenerate shape: zero spatial extent");
  }

  std::vector<std::uint32_t> counts(static_cast<std::size_t>(n) * n, 0);
  for (const auto& p : frame) {
    const auto pos = grid_position(p, cell, n);
    // The farthest pixel lands exactly on the far edge; clamp it inside.
    const int col = std::clamp(static_cast<int>(std::floor(pos.col)), 0, n - 1);
    const int row = std::clamp(static_cast<int>(std::floor(pos.row)), 0, n - 1);
    ++counts[static_cast<std::size_t>(row) * n + col];
  }
  return LabeledGrid(cfg, GridFrame{m.cx, m.cy, orientation, cell},
                     std::move(counts));
}

int track_of(int row, int col, int n) {
  const int c = (n - 1) / 2;
  return std::max(std::abs(row - c), std::abs(col - c));
}

GridDescriptor track_probabilities(const LabeledGrid& grid) {
  const int n = grid.n();
  const int tracks = grid.config().track_count();
  std::vector<double> interior(tracks, 0.0);
  std::vector<double> boundary(tracks, 0.0);
  double interior_total = 0.0;
  double boundary_total = 0.0;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int d = track_of(row, col, n);
      if (d == 0 && grid.config().exclude_center) continue;
      switch (grid.label(row, col)) {
        case CellLabel::kInterior:
          interior[d] += 1.0;
          interior_total += 1.0;
          break;
        case CellLabel::kBoundary:
          boundary[d] += 1.0;
          boundary_total += 1.0;
          break;
        case CellLabel::kBackground:
          break;
      }
    }
  }
  if (interior_total > 0.0) {
    for (auto& v : interior) v /= interior_total;
  }
  if (boundary_total > 0.0) {
    for (auto& v : boundary) v /= boundary_total;
  }
  return {std::move(interior), std::move(boundary)};
}

}  // namespace gridshape
