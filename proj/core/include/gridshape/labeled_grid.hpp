#pragma once

#include <cstdint>
#include <vector>

#include "gridshape/moments.hpp"
#include "gridshape/raster.hpp"

namespace gridshape {

struct GridConfig {
  /// Cells per side; odd and >= 3 so a single cell sits on the centroid.
  int n = 21;
  /// Coverage at or above which a cell is Interior.
  double interior_threshold = 0.75;
  /// Leave the central cell out of the track statistics.
  bool exclude_center = false;

  /// Throws kInvalidArgument with a user-facing message.
  void validate() const;
  int track_count() const { return (n - 1) / 2 + 1; }
};

enum class CellLabel : std::uint8_t { kBackground, kBoundary, kInterior };

struct GridFrame {
  double cx = 0.0;
  double cy = 0.0;
  Orientation orientation;
  /// Side of one cell in pixels.
  double cell_size = 0.0;
};

class LabeledGrid {
 public:
  LabeledGrid(GridConfig config, GridFrame frame,
              std::vector<std::uint32_t> counts);

  const GridConfig& config() const noexcept { return config_; }
  const GridFrame& frame() const noexcept { return frame_; }
  int n() const noexcept { return config_.n; }

  CellLabel label(int row, int col) const;
  std::uint32_t pixel_count(int row, int col) const;
  double coverage(int row, int col) const;

  const std::vector<CellLabel>& labels() const noexcept { return labels_; }

 private:
  GridConfig config_;
  GridFrame frame_;
  std::vector<std::uint32_t> counts_;
  std::vector<CellLabel> labels_;
};

/// Per-track occurrence probabilities, index 0 is the central cell.
struct GridDescriptor {
  std::vector<double> interior_probs;
  std::vector<double> boundary_probs;

  friend bool operator==(const GridDescriptor&, const GridDescriptor&) = default;
};

/// Grid position of a frame point, in cell units with the grid's top-left
/// corner at (0, 0). Column follows u, row follows v.
struct GridPosition {
  double col = 0.0;
  double row = 0.0;
};

GridPosition grid_position(const FramePoint& p, double cell_size, int n);

/// Cell side such that the square grid centered on the centroid reaches the
/// farthest pixel center along either frame axis.
double grid_cell_size(const std::vector<FramePoint>& frame, int n);

CellLabel classify_cell(std::uint32_t count, double cell_size,
                        double interior_threshold);

LabeledGrid build_grid(const BinaryImage& img, const MomentSet& m,
                       const Orientation& orientation, const GridConfig& cfg);

/// Chebyshev distance of cell (row, col) from the central cell.
int track_of(int row, int col, int n);

GridDescriptor track_probabilities(const LabeledGrid& grid);

}  // namespace gridshape
