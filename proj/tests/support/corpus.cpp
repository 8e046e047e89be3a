#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gridshape::testing {

namespace {

// Pixels per shape unit at scale 1. At scale 0.5 the smallest family still
// spans about 160 pixels, so 21x21 grid cells are at least 7 pixels wide and
// a fully covered cell never drops below 0.75 coverage from raster aliasing.
constexpr double kUnit = 9.0;

// Half-size of the family's bounding square at scale 1.
double base_radius(Family f) {
  switch (f) {
    case Family::kDisk: return 20.0;
    case Family::kSquare: return 18.0 * std::sqrt(2.0);
    case Family::kRectangle: return std::hypot(24.0, 12.0);
    case Family::kAnnulus: return 22.0;
    case Family::kCross: return std::hypot(21.0, 6.0);
    case Family::kTriangle: return 24.0;
  }
  return 24.0;
}

bool inside(Family f, double x, double y) {
  switch (f) {
    case Family::kDisk:
      return x * x + y * y <= 20.0 * 20.0;
    case Family::kSquare:
      return std::fabs(x) <= 18.0 && std::fabs(y) <= 18.0;
    case Family::kRectangle:
      return std::fabs(x) <= 24.0 && std::fabs(y) <= 12.0;
    case Family::kAnnulus: {
      const double r2 = x * x + y * y;
      return r2 <= 22.0 * 22.0 && r2 >= 12.0 * 12.0;
    }
    case Family::kCross:
      return (std::fabs(x) <= 6.0 && std::fabs(y) <= 21.0) ||
             (std::fabs(y) <= 6.0 && std::fabs(x) <= 21.0);
    case Family::kTriangle: {
      // Scalene: vertices (-22, 16), (22, 16), (-8, -20).
      auto side = [&](double ax, double ay, double bx, double by) {
        return (bx - ax) * (y - ay) - (by - ay) * (x - ax);
      };
      const double d1 = side(-22, 16, 22, 16);
      const double d2 = side(22, 16, -8, -20);
      const double d3 = side(-8, -20, -22, 16);
      return (d1 <= 0 && d2 <= 0 && d3 <= 0) || (d1 >= 0 && d2 >= 0 && d3 >= 0);
    }
  }
  return false;
}

}  // namespace

bool is_convex(Family f) {
  return f == Family::kDisk || f == Family::kSquare || f == Family::kRectangle ||
         f == Family::kTriangle;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kDisk: return "disk";
    case Family::kSquare: return "square";
    case Family::kRectangle: return "rectangle";
    case Family::kAnnulus: return "annulus";
    case Family::kCross: return "cross";
    case Family::kTriangle: return "triangle";
  }
  return "unknown";
}

BinaryImage render(Family f, double scale, int margin) {
  const double px_scale = scale * kUnit;
  const int half = static_cast<int>(std::ceil(base_radius(f) * px_scale)) + margin;
  const int side = 2 * half;
  BinaryImage img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double px = (x + 0.5 - half) / px_scale;
      const double py = (y + 0.5 - half) / px_scale;
      if (inside(f, px, py)) img.set(x, y, true);
    }
  }
  return img;
}

BinaryImage rotate90(const BinaryImage& img, int quarter_turns) {
  const int turns = ((quarter_turns % 4) + 4) % 4;
  BinaryImage cur = img;
  for (int t = 0; t < turns; ++t) {
    BinaryImage next(cur.height(), cur.width());
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        // (x, y) -> (y, W-1-x)
        next.set(y, cur.width() - 1 - x, cur.at(x, y));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

BinaryImage translate(const BinaryImage& img, int dx, int dy, int pad) {
  BinaryImage out(img.width() + dx + pad, img.height() + dy + pad);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) out.set(x + dx, y + dy, true);
    }
  }
  return out;
}

BinaryImage upscale(const BinaryImage& img, int factor) {
  BinaryImage out(img.width() * factor, img.height() * factor);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.set(x, y, img.at(x / factor, y / factor));
    }
  }
  return out;
}

BinaryImage rotate_resample(const BinaryImage& img, double radians) {
  const double cx = img.width() / 2.0;
  const double cy = img.height() / 2.0;
  const int side = static_cast<int>(std::ceil(std::hypot(img.width(), img.height()))) + 2;
  BinaryImage out(side, side);
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double ox = x + 0.5 - side / 2.0;
      const double oy = y + 0.5 - side / 2.0;
      // Inverse rotation back into the source.
      const double sx = c * ox + s * oy + cx;
      const double sy = -s * ox + c * oy + cy;
      const int ix = static_cast<int>(std::floor(sx));
      const int iy = static_cast<int>(std::floor(sy));
      if (img.contains_shape(ix, iy)) out.set(x, y, true);
    }
  }
  return out;
}

std::vector<CorpusEntry> synthetic_corpus(int per_family, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::uniform_int_distribution<int> turns(0, 3);
  std::uniform_int_distribution<int> shift(0, 20);
  std::vector<CorpusEntry> out;
  for (const Family f : kAllFamilies) {
    for (int i = 0; i < per_family; ++i) {
      const double s = scale(rng);
      const int t = turns(rng);
      const int dx = shift(rng);
      const int dy = shift(rng);
      BinaryImage img = translate(rotate90(render(f, s), t), dx, dy, 3);
      const std::string name = family_name(f);
      out.push_back({name + "-" + std::to_string(i + 1), name, f, std::move(img)});
    }
  }
  return out;
}

BinaryImage random_blob(std::uint32_t seed, int canvas, int pixels) {
  std::mt19937 rng(seed);
  BinaryImage img(canvas, canvas);
  std::vector<Point> grown{{canvas / 2, canvas / 2}};
  img.set(canvas / 2, canvas / 2, true);
  std::uniform_int_distribution<int> dir(0, 7);
  static constexpr int kDx[] = {-1, -1, 0, 1, 1, 1, 0, -1};
  static constexpr int kDy[] = {0, -1, -1, -1, 0, 1, 1, 1};
  int attempts = 0;
  while (static_cast<int>(grown.size()) < pixels && attempts++ < pixels * 200) {
    std::uniform_int_distribution<std::size_t> pick(0, grown.size() - 1);
    const Point p = grown[pick(rng)];
    const int d = dir(rng);
    const int nx = p.x + kDx[d];
    const int ny = p.y + kDy[d];
    if (nx < 1 || ny < 1 || nx >= canvas - 1 || ny >= canvas - 1 || img.at(nx, ny)) continue;
    img.set(nx, ny, true);
    grown.push_back({nx, ny});
  }
  return img;
}

}  // namespace gridshape::testing
