#include "gridshape/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gridshape/error.hpp"

namespace gridshape {

BinaryImage::BinaryImage(int width, int height)
    : BinaryImage(width, height,
                  std::vector<std::uint8_t>(
                      static_cast<std::size_t>(std::max(width, 0)) *
                          static_cast<std::size_t>(std::max(height, 0)),
                      0)) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> mask)
    : width_(width), height_(height), mask_(std::move(mask)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (mask_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::kInvalidArgument,
                "mask size does not match image dimensions");
  }
  for (auto& v : mask_) v = v ? 1 : 0;
}

std::size_t BinaryImage::index(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    throw Error(ErrorKind::kInvalidArgument,
                "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                    ") outside image");
  }
  return static_cast<std::size_t>(y) * width_ + x;
}

std::size_t BinaryImage::count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

namespace {

// Clockwise in image coordinates (y grows downward), starting west.
constexpr std::array<Point, 8> kMoore = {{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1},
}};

int moore_index(Point delta) {
  for (int i = 0; i < 8; ++i) {
    if (kMoore[i] == delta) return i;
  }
  return -1;
}

std::vector<Point> first_shape_pixel(const BinaryImage& img) {
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) return {Point{x, y}};
    }
  }
  return {};
}

// Andrew's monotone chain on integer points; returns twice the hull area.
std::int64_t doubled_hull_area(std::vector<std::array<std::int64_t, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0;

  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<std::int64_t, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return 0;

  std::int64_t twice = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return twice < 0 ? -twice : twice;
}

}  // namespace

BinaryImage largest_component(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t seed = static_cast<std::size_t>(y) * w + x;
      if (!img.at(x, y) || label[seed] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      std::size_t size = 0;
      label[seed] = id;
      stack.push_back(seed);
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        ++size;
        const int cx = static_cast<int>(cur % w);
        const int cy = static_cast<int>(cur / w);
        for (const auto& d : kMoore) {
          const int nx = cx + d.x;
          const int ny = cy + d.y;
          if (!img.contains_shape(nx, ny)) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
          if (label[ni] < 0) {
            label[ni] = id;
            stack.push_back(ni);
          }
        }
      }
      sizes.push_back(size);
    }
  }
  if (sizes.empty()) {
    throw Error(ErrorKind::kEmptyShape, "empty shape: no foreground pixels");
  }

  // Components are numbered in row-major order of their first pixel, so the
  // first maximum wins the tie-break.
  const int keep = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<std::uint8_t> mask(label.size(), 0);
  for (std::size_t i = 0; i < label.size(); ++i) {
    mask[i] = label[i] == keep ? 1 : 0;
  }
  return BinaryImage(w, h, std::move(mask));
}

Contour trace_contour(const BinaryImage& img) {
  const auto first = first_shape_pixel(img);
  if (first.empty()) {
    throw Error(ErrorKind::kEmptyShape, "empty shape: nothing to trace");
  }
  const Point start = first.front();
  Contour contour;
  contour.points.push_back(start);

  Point cur = start;
  int backtrack = 0;  // west of the first pixel is always background
  const std::size_t limit = 4 * img.count() + 16;

  for (std::size_t steps = 0; steps < limit; ++steps) {
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int idx = (backtrack + k) % 8;
      if (img.contains_shape(cur.x + kMoore[idx].x, cur.y + kMoore[idx].y)) {
        found = idx;
        break;
      }
    }
    if (found < 0) return contour;  // isolated pixel

    const Point next{cur.x + kMoore[found].x, cur.y + kMoore[found].y};
    if (cur == start && contour.points.size() > 1 &&
        next == contour.points[1]) {
      contour.points.pop_back();  // the closing visit to start
      return contour;
    }
    const Point prev = kMoore[(found + 7) % 8];
    backtrack =
        moore_index(Point{cur.x + prev.x - next.x, cur.y + prev.y - next.y});
    contour.points.push_back(next);
    cur = next;
  }
  throw Error(ErrorKind::kDegenerateShape,
              "contour tracing did not close; is the shape 8-connected?");
}

StepCounts contour_steps(const Contour& c) {
  StepCounts counts;
  const auto& pts = c.points;
  if (pts.size() < 2) return counts;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % pts.size()];
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    if (dx == 1 && dy == 1) {
      ++counts.diagonal;
    } else if (dx + dy == 1) {
      ++counts.axial;
    } else if (dx + dy > 0) {
      counts.other_length += std::hypot(dx, dy);
    }
  }
  return counts;
}

double perimeter(const Contour& c) {
  // Summing counts keeps the result independent of the walk's start point.
  const StepCounts s = contour_steps(c);
  return static_cast<double>(s.axial) +
         static_cast<double>(s.diagonal) * std::numbers::sqrt2 +
         s.other_length;
}

double convex_hull_area(const BinaryImage& img) {
  std::vector<std::array<std::int64_t, 2>> pts;
  for (int y = 0; y < img.height(); ++y) {
    int lo = -1;
    int hi = -1;
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      if (lo < 0) lo = x;
      hi = x;
    }
    if (lo < 0) continue;
    pts.push_back({lo, y});
    pts.push_back({hi, y});
  }
  return static_cast<double>(doubled_hull_area(std::move(pts))) / 2.0;
}

double pixel_square_hull_area(const BinaryImage& img) {
  std::vector<std::array<std::int64_t, 2>> pts;
  for (int y = 0; y < img.height(); ++y) {
    int lo = -1;
    int hi = -1;
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      if (lo < 0) lo = x;
      hi = x;
    }
    if (lo < 0) continue;
    pts.push_back({lo, y});
    pts.push_back({lo, y + 1});
    pts.push_back({hi + 1, y});
    pts.push_back({hi + 1, y + 1});
  }
  return static_cast<double>(doubled_hull_area(std::move(pts))) / 2.0;
}

}  // namespace gridshape
