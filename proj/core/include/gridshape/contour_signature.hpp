#pragma once

#include <vector>

#include "gridshape/labeled_grid.hpp"

namespace gridshape {

/// Centroid distance function sampled over M equal angle bins of the
/// grid-aligned frame; bin k covers [2*pi*k/M, 2*pi*(k+1)/M).
struct CdfSignature {
  std::vector<double> bins;
  /// Set when the grid had no Boundary cell away from the center; bins are
  /// then all zero.
  bool degenerate = false;

  friend bool operator==(const CdfSignature&, const CdfSignature&) = default;
};

inline constexpr int kDefaultCdfBins = 128;

/// Distance to the outermost Boundary cell per angle bin (max aggregation),
/// empty bins filled by circular linear interpolation, normalized by the
/// largest bin.
CdfSignature cdf_from_grid(const LabeledGrid& grid, int bins = kDefaultCdfBins);

}  // namespace gridshape
