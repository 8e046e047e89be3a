#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "corpus.hpp"
#include "gridshape/contour_signature.hpp"
#include "gridshape/error.hpp"

namespace gs = gridshape;
namespace gt = gridshape::testing;
using gs::CellLabel;

namespace {

gs::LabeledGrid grid_with(int n, const std::vector<std::pair<int, int>>& boundary_cells,
                          const std::vector<std::pair<int, int>>& interior_cells = {}) {
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(n) * n, 0);
  for (auto [r, c] : boundary_cells) counts[static_cast<std::size_t>(r) * n + c] = 1;
  for (auto [r, c] : interior_cells) counts[static_cast<std::size_t>(r) * n + c] = 4;
  return gs::LabeledGrid({n, 0.75}, {0, 0, {}, 2.0}, counts);
}

std::vector<std::pair<int, int>> ring(int n, int t) {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (gs::track_of(r, c, n) == t) cells.push_back({r, c});
  return cells;
}

gs::CdfSignature signature_of(const gs::BinaryImage& img) {
  const auto m = gs::compute_moments(img);
  return gs::cdf_from_grid(
      gs::build_grid(img, m, gs::disambiguate_orientation(img, m), {21, 0.75}));
}

}  // namespace

TEST(CdfSignature, RingVariesBetweenCornerAndEdgeMidpoint) {
  const int n = 21;
  for (int t : {3, 5, 10}) {
    const auto sig = gs::cdf_from_grid(grid_with(n, ring(n, t)));
    ASSERT_EQ(sig.bins.size(), 128u);
    EXPECT_FALSE(sig.degenerate);
    const auto [lo, hi] = std::minmax_element(sig.bins.begin(), sig.bins.end());
    EXPECT_DOUBLE_EQ(*hi, 1.0);
    // Edge midpoints sit at distance t, corners at t*sqrt(2).
    EXPECT_NEAR(*lo, 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(sig.bins[0], 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(sig.bins[16], 1.0);  // 45 degrees
  }
}

TEST(CdfSignature, SingleBoundaryCellFillsEveryBin) {
  const auto sig = gs::cdf_from_grid(grid_with(9, {{1, 6}}));
  for (double v : sig.bins) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(CdfSignature, NoBoundaryCellsIsDegenerate) {
  std::vector<std::pair<int, int>> all;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) all.push_back({r, c});
  const auto sig = gs::cdf_from_grid(grid_with(5, {}, all));
  EXPECT_TRUE(sig.degenerate);
  for (double v : sig.bins) EXPECT_EQ(v, 0.0);
}

TEST(CdfSignature, CenterOnlyBoundaryIsDegenerate) {
  const auto sig = gs::cdf_from_grid(grid_with(5, {{2, 2}}));
  EXPECT_TRUE(sig.degenerate);
}

TEST(CdfSignature, GapsAreInterpolatedCircularly) {
  // Two anchors: east at distance 2 (bin 0), west at distance 4 (bin 32 of 64).
  const int n = 9;
  const auto sig = gs::cdf_from_grid(grid_with(n, {{4, 6}, {4, 0}}), 64);
  EXPECT_DOUBLE_EQ(sig.bins[0], 0.5);
  EXPECT_DOUBLE_EQ(sig.bins[32], 1.0);
  EXPECT_NEAR(sig.bins[16], 0.75, 1e-12);
  EXPECT_NEAR(sig.bins[48], 0.75, 1e-12);  // wraps through 2*pi
}

TEST(CdfSignature, RejectsTooFewBins) {
  EXPECT_THROW(gs::cdf_from_grid(grid_with(5, {{0, 0}}), 4), gs::Error);
}

TEST(CdfSignature, PropertyPeakIsOneOnCorpus) {
  for (const auto& e : gt::synthetic_corpus(4, 17)) {
    const auto m = gs::compute_moments(e.image);
    const auto g =
        gs::build_grid(e.image, m, gs::disambiguate_orientation(e.image, m), {21, 0.75});
    const auto sig = gs::cdf_from_grid(g);
    // Axis-aligned squares and rectangles can cover every occupied cell to at
    // least tau and leave no Boundary cell.
    bool boundary = false;
    for (int r = 0; r < g.n(); ++r)
      for (int c = 0; c < g.n(); ++c)
        boundary = boundary || (g.label(r, c) == CellLabel::kBoundary && gs::track_of(r, c, g.n()) > 0);
    EXPECT_EQ(sig.degenerate, !boundary) << e.id;
    const double peak = *std::max_element(sig.bins.begin(), sig.bins.end());
    EXPECT_DOUBLE_EQ(peak, boundary ? 1.0 : 0.0) << e.id;
    if (e.family != gt::Family::kSquare && e.family != gt::Family::kRectangle) {
      EXPECT_TRUE(boundary) << e.id;
    }
    for (double v : sig.bins) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(CdfSignature, DiskIsNearlyFlat) {
  const auto sig = signature_of(gt::render(gt::Family::kDisk, 2.0));
  EXPECT_GT(*std::min_element(sig.bins.begin(), sig.bins.end()), 0.85);
}

TEST(CdfSignature, PropertyScaleToleranceOnCorpusShapes) {
  for (const auto f : gt::kAllFamilies) {
    for (const double s : {0.5, 0.9, 1.6}) {
      const auto a = signature_of(gt::render(f, s));
      const auto b = signature_of(gt::render(f, 2 * s));
      double worst = 0.0;
      for (std::size_t k = 0; k < a.bins.size(); ++k) {
        worst = std::max(worst, std::fabs(a.bins[k] - b.bins[k]));
      }
      EXPECT_LE(worst, 0.1) << gt::family_name(f) << " scale " << s;
    }
  }
}
