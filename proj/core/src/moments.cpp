#include "gridshape/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gridshape/error.hpp"
#include "exact_moments.hpp"

namespace gridshape {

namespace {

using detail::Int128;

constexpr double kPi = std::numbers::pi;

}  // namespace

double Orientation::radians() const {
  double a = quarter_turns * (kPi / 2.0) + residual;
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a -= 2.0 * kPi;
  return a;
}

MomentSet compute_moments(const BinaryImage& img) {
  MomentSet m;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      ++m.count;
      m.sum_x += x;
      m.sum_y += y;
      m.sum_xx += static_cast<std::int64_t>(x) * x;
      m.sum_yy += static_cast<std::int64_t>(y) * y;
      m.sum_xy += static_cast<std::int64_t>(x) * y;
    }
  }
  if (m.count == 0) {
    throw Error(ErrorKind::kEmptyShape, "empty shape: no pixels for moments");
  }
  const double n = static_cast<double>(m.count);
  const auto central = detail::scaled_central_moments(m);
  m.area = n;
  m.cx = static_cast<double>(m.sum_x) / n;
  m.cy = static_cast<double>(m.sum_y) / n;
  m.mu20 = static_cast<double>(central.a20) / n;
  m.mu02 = static_cast<double>(central.a02) / n;
  m.mu11 = static_cast<double>(central.a11) / n;

  // atan2 only ever sees the doubled-angle vector in one half-plane; the
  // other half is handled as a quarter turn. A raster rotated by 90 degrees
  // negates that vector and therefore yields the same residual.
  const Int128 d = central.a20 - central.a02;
  const Int128 b = 2 * central.a11;
  if (d == 0 && b == 0) {
    m.axis = {};
  } else {
    const bool canonical = d > 0 || (d == 0 && b > 0);
    const double psi = canonical
                           ? std::atan2(static_cast<double>(b), static_cast<double>(d))
                           : std::atan2(static_cast<double>(-b), static_cast<double>(-d));
    const double residual = psi / 2.0;
    int turns = canonical ? 0 : 1;
    if (turns == 0 && residual < 0.0) turns = 2;  // fold into [0, pi)
    m.axis = {turns, residual};
  }
  m.theta = m.axis.radians();
  return m;
}

double axis_skewness(const BinaryImage& img, const MomentSet& m,
                     const Orientation& o) {
  const auto s = detail::third_order_sums(img, m, o.quarter_turns);
  const long double c = std::cos(static_cast<long double>(o.residual));
  const long double sn = std::sin(static_cast<long double>(o.residual));
  const long double n = static_cast<long double>(m.count);
  const long double value =
      c * c * c * static_cast<long double>(s.s30) +
      3 * c * c * sn * static_cast<long double>(s.s21) +
      3 * c * sn * sn * static_cast<long double>(s.s12) +
      sn * sn * sn * static_cast<long double>(s.s03);
  return static_cast<double>(value / (n * n * n));
}

Orientation disambiguate_orientation(const BinaryImage& img,
                                     const MomentSet& m) {
  const Orientation base = m.axis;
  const auto s = detail::third_order_sums(img, m, base.quarter_turns);
  if (base.residual == 0.0) {
    return s.s30 < 0 ? base.flipped() : base;
  }
  const long double c = std::cos(static_cast<long double>(base.residual));
  const long double sn = std::sin(static_cast<long double>(base.residual));
  const long double terms[4] = {
      c * c * c * static_cast<long double>(s.s30),
      3 * c * c * sn * static_cast<long double>(s.s21),
      3 * c * sn * sn * static_cast<long double>(s.s12),
      sn * sn * sn * static_cast<long double>(s.s03),
  };
  long double value = 0;
  long double magnitude = 0;
  for (const auto t : terms) {
    value += t;
    magnitude += std::fabs(t);
  }
  // Symmetric shapes cancel only up to rounding once cos/sin are inexact.
  if (std::fabs(value) <= 1e-12L * magnitude) return base;
  return value < 0 ? base.flipped() : base;
}

std::vector<FramePoint> frame_coordinates(const BinaryImage& img,
                                          const MomentSet& m,
                                          const Orientation& o) {
  const double c = std::cos(o.residual);
  const double s = std::sin(o.residual);
  const double n = static_cast<double>(m.count);
  std::vector<FramePoint> out;
  out.reserve(static_cast<std::size_t>(m.count));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      const auto [uq, vq] = detail::quarter_rotated(m, x, y, o.quarter_turns);
      const double U = static_cast<double>(uq);
      const double V = static_cast<double>(vq);
      out.push_back({(U * c + V * s) / n, (V * c - U * s) / n});
    }
  }
  return out;
}

std::array<double, 2> covariance_eigenvalues(const MomentSet& m) {
  const auto a = detail::scaled_central_moments(m);
  const long double n2 = static_cast<long double>(m.count) *
                         static_cast<long double>(m.count);
  const long double half_sum = static_cast<long double>(a.a20 + a.a02) / 2;
  const long double half_diff = static_cast<long double>(a.a20 - a.a02) / 2;
  const long double off = static_cast<long double>(a.a11);
  const long double root = std::sqrt(half_diff * half_diff + off * off);
  const long double l1 = (half_sum + root) / n2;
  const long double l2 = std::max<long double>(0, (half_sum - root) / n2);
  return {static_cast<double>(l1), static_cast<double>(l2)};
}

GlobalFeatures global_features(const BinaryImage& img, const MomentSet& m,
                               const Contour& c,
                               const GlobalFeatureOptions& opts) {
  if (m.count == 0) {
    throw Error(ErrorKind::kEmptyShape, "empty shape: no global features");
  }
  GlobalFeatures g;
  const auto [l1, l2] = covariance_eigenvalues(m);
  const double area = m.area;

  g.eccentricity = l1 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - l2 / l1)) : 0.0;

  const double p = perimeter(c);
  g.circularity = p > 0.0 ? 4.0 * kPi * area / (p * p) : 0.0;

  if (l1 == 0.0) {
    g.aspect_ratio = 1.0;
  } else if (l2 == 0.0) {
    g.aspect_ratio = opts.max_aspect_ratio;
  } else {
    g.aspect_ratio = std::min(opts.max_aspect_ratio, std::sqrt(l1 / l2));
  }

  const auto frame = frame_coordinates(img, m, disambiguate_orientation(img, m));
  double umin = std::numeric_limits<double>::infinity();
  double umax = -umin;
  double vmin = umin;
  double vmax = -umin;
  for (const auto& pt : frame) {
    umin = std::min(umin, pt.u);
    umax = std::max(umax, pt.u);
    vmin = std::min(vmin, pt.v);
    vmax = std::max(vmax, pt.v);
  }
  // Pixel centers span max-min; the pixels themselves add one unit.
  const double box = (umax - umin + 1.0) * (vmax - vmin + 1.0);
  g.extent = std::min(1.0, area / box);

  const double hull = pixel_square_hull_area(img);
  g.solidity = hull > 0.0 ? std::min(1.0, area / hull) : 1.0;
  return g;
}

}  // namespace gridshape
