#include "gridshape/contour_signature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gridshape/error.hpp"

namespace gridshape {

CdfSignature cdf_from_grid(const LabeledGrid& grid, int bins) {
  if (bins < 8) {
    throw Error(ErrorKind::kInvalidArgument,
                "cdf bin count must be >= 8, got " + std::to_string(bins));
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const int n = grid.n();
  const int c = (n - 1) / 2;

  // Distances are in cell units; the final normalization removes the scale.
  std::vector<double> raw(bins, 0.0);
  std::vector<bool> filled(bins, false);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (grid.label(row, col) != CellLabel::kBoundary) continue;
      const int du = col - c;
      const int dv = row - c;
      double angle = std::atan2(static_cast<double>(dv), static_cast<double>(du));
      if (angle < 0.0) angle += kTwoPi;
      const int k = std::min(bins - 1, static_cast<int>(angle / kTwoPi * bins));
      const double dist = std::hypot(static_cast<double>(du), static_cast<double>(dv));
      raw[k] = filled[k] ? std::max(raw[k], dist) : dist;
      filled[k] = true;
    }
  }

  CdfSignature sig;
  sig.bins.assign(bins, 0.0);
  std::vector<int> anchors;
  for (int k = 0; k < bins; ++k) {
    if (filled[k]) anchors.push_back(k);
  }
  if (anchors.empty()) {
    sig.degenerate = true;
    return sig;
  }

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const int from = anchors[a];
    const int to = anchors[(a + 1) % anchors.size()];
    sig.bins[from] = raw[from];
    // Wraps once around the circle when there is a single anchor.
    const int gap = ((to - from) % bins + bins) % bins == 0
                        ? bins
                        : ((to - from) % bins + bins) % bins;
    for (int step = 1; step < gap; ++step) {
      const double t = static_cast<double>(step) / gap;
      sig.bins[(from + step) % bins] = raw[from] + (raw[to] - raw[from]) * t;
    }
  }

  const double peak = *std::max_element(sig.bins.begin(), sig.bins.end());
  if (!(peak > 0.0)) {
    std::fill(sig.bins.begin(), sig.bins.end(), 0.0);
    sig.degenerate = true;
    return sig;
  }
  for (auto& v : sig.bins) v /= peak;
  return sig;
}

}  // namespace gridshape
