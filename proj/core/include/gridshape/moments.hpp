#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gridshape/raster.hpp"

namespace gridshape {

/// A direction expressed as whole quarter turns plus a residual angle in
/// (-pi/4, pi/4]. Splitting off the quarter turns lets frame coordinates be
/// computed with exact integer swaps, so a raster rotated by 90 degrees maps
/// to bit-identical frame coordinates.
struct Orientation {
  int quarter_turns = 0;  // 0..3
  double residual = 0.0;

  /// Angle in [0, 2*pi).
  double radians() const;
  Orientation flipped() const { return {(quarter_turns + 2) % 4, residual}; }

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

struct MomentSet {
  double area = 0.0;  // m00, pixel count
  double cx = 0.0;
  double cy = 0.0;
  double mu20 = 0.0;
  double mu02 = 0.0;
  double mu11 = 0.0;
  /// Principal-axis angle in [0, pi); 0 for isotropic shapes.
  double theta = 0.0;
  /// Same axis as `theta`, in exact form.
  Orientation axis;

  // Exact accumulators over pixel centers.
  std::int64_t count = 0;
  std::int64_t sum_x = 0;
  std::int64_t sum_y = 0;
  std::int64_t sum_xx = 0;
  std::int64_t sum_yy = 0;
  std::int64_t sum_xy = 0;
};

MomentSet compute_moments(const BinaryImage& img);

/// Third-order moment of the pixels projected on the direction `o`
/// (sum of u^3 about the centroid), in pixel^3 units.
double axis_skewness(const BinaryImage& img, const MomentSet& m,
                     const Orientation& o);

/// Picks theta or theta + pi so that the projected skewness is >= 0.
/// A skewness that vanishes (exactly, or to rounding when the axis is not
/// grid-aligned) keeps theta.
Orientation disambiguate_orientation(const BinaryImage& img,
                                     const MomentSet& m);

struct FramePoint {
  double u = 0.0;
  double v = 0.0;
};

/// Centroid-relative pixel-center coordinates rotated into the frame whose
/// u-axis points along `o`, in pixel units, listed in row-major pixel order.
std::vector<FramePoint> frame_coordinates(const BinaryImage& img,
                                          const MomentSet& m,
                                          const Orientation& o);

struct GlobalFeatures {
  double eccentricity = 0.0;
  double circularity = 0.0;
  double aspect_ratio = 1.0;
  double extent = 0.0;
  double solidity = 0.0;

  std::array<double, 5> to_array() const {
    return {eccentricity, circularity, aspect_ratio, extent, solidity};
  }
  friend bool operator==(const GlobalFeatures&, const GlobalFeatures&) = default;
};

struct GlobalFeatureOptions {
  double max_aspect_ratio = 1e6;
};

/// Covariance eigenvalues (largest first) of the pixel distribution.
std::array<double, 2> covariance_eigenvalues(const MomentSet& m);

GlobalFeatures global_features(const BinaryImage& img, const MomentSet& m,
                               const Contour& c,
                               const GlobalFeatureOptions& opts = {});

}  // namespace gridshape
