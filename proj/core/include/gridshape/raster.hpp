#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gridshape {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Row-major bitmask; true marks a shape pixel. x is the column, y the row.
class BinaryImage {
 public:
  BinaryImage(int width, int height);
  BinaryImage(int width, int height, std::vector<std::uint8_t> mask);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool at(int x, int y) const { return mask_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { mask_[index(x, y)] = value ? 1 : 0; }

  /// Out-of-range coordinates read as background.
  bool contains_shape(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_ &&
           mask_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }

  std::span<const std::uint8_t> mask() const noexcept { return mask_; }
  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int x, int y) const;

  int width_;
  int height_;
  std::vector<std::uint8_t> mask_;
};

/// Closed outer boundary; consecutive points (and last/first) are 8-neighbors.
/// Points may repeat where the shape is one pixel thick.
struct Contour {
  std::vector<Point> points;
};

/// Keeps only the largest 8-connected component. Ties go to the component
/// whose first pixel in row-major order comes first.
BinaryImage largest_component(const BinaryImage& img);

/// Moore-neighbor tracing of the outer boundary, starting at the first shape
/// pixel in row-major order. Terminates when the first transition repeats.
Contour trace_contour(const BinaryImage& img);

/// Step counts of a closed contour walk (including last→first). Steps that
/// are not 8-neighbor moves only occur in hand-built contours and are kept as
/// Euclidean length.
struct StepCounts {
  std::size_t axial = 0;
  std::size_t diagonal = 0;
  double other_length = 0.0;
};

StepCounts contour_steps(const Contour& c);

/// Closed length: 1 per 4-neighbor step, sqrt(2) per diagonal step.
double perimeter(const Contour& c);

/// Shoelace area of the convex hull of shape-pixel centers; 0 when collinear.
double convex_hull_area(const BinaryImage& img);

/// Hull area over pixel corners, i.e. treating each pixel as a unit square.
/// Always >= the pixel count.
double pixel_square_hull_area(const BinaryImage& img);

}  // namespace gridshape
