#ifndef PURSUIT_TORUS_HPP
#define PURSUIT_TORUS_HPP

// Geometry of the unit torus [0,1)^2.

#include <cmath>
#include <numbers>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit {

/// Planar (unwrapped) vector.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) noexcept = default;

  double norm() const noexcept { return std::hypot(x, y); }
  double bearing() const noexcept { return std::atan2(y, x); }
};

namespace detail {

inline double wrap_unit(double v) noexcept {
  double w = v - std::floor(v);
  // v slightly below an integer rounds up to exactly 1.0
  return w >= 1.0 ? 0.0 : w;
}

inline double wrap_half(double d) noexcept {
  d -= std::floor(d + 0.5);
  if (d >= 0.5) d -= 1.0;
  if (d < -0.5) d += 1.0;
  return d;
}

}  // namespace detail

/// Point on the unit torus; both coordinates always lie in [0, 1).
class Point2 {
 public:
  constexpr Point2() noexcept = default;

  /// Wraps (x, y) onto the torus. Throws InvalidArgument for non-finite input.
  Point2(double x, double y) : x_(0.0), y_(0.0) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw InvalidArgument("Point2: non-finite coordinate");
    }
    x_ = detail::wrap_unit(x);
    y_ = detail::wrap_unit(y);
  }

  constexpr double x() const noexcept { return x_; }
  constexpr double y() const noexcept { return y_; }
  constexpr Vec2 vec() const noexcept { return {x_, y_}; }

  friend constexpr bool operator==(const Point2&, const Point2&) noexcept = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

/// Minimal wrapped offset between two torus points; components in [-0.5, 0.5).
class Displacement2 {
 public:
  constexpr Displacement2() noexcept = default;

  static Displacement2 from_raw(double dx, double dy) noexcept {
    Displacement2 d;
    d.dx_ = detail::wrap_half(dx);
    d.dy_ = detail::wrap_half(dy);
    return d;
  }

  constexpr double dx() const noexcept { return dx_; }
  constexpr double dy() const noexcept { return dy_; }
  constexpr Vec2 vec() const noexcept { return {dx_, dy_}; }
  double norm() const noexcept { return std::hypot(dx_, dy_); }
  double bearing() const noexcept { return std::atan2(dy_, dx_); }

  friend constexpr bool operator==(const Displacement2&, const Displacement2&) noexcept = default;

 private:
  double dx_ = 0.0;
  double dy_ = 0.0;
};

inline Point2 wrap(Vec2 p) { return Point2(p.x, p.y); }

/// Shortest offset from `from` to `to`; ties at exactly 0.5 map to -0.5.
inline Displacement2 displacement(const Point2& from, const Point2& to) noexcept {
  return Displacement2::from_raw(to.x() - from.x(), to.y() - from.y());
}

inline double distance(const Point2& a, const Point2& b) noexcept {
  return displacement(a, b).norm();
}

/// Copies of p shifted by every integer offset (i, j), -k <= i, j <= k.
/// Row-major: i is the outer loop. The centre entry, index k*(2k+1)+k, is p.
inline std::vector<Vec2> replicate(Vec2 p, int k) {
  if (k < 0) throw InvalidArgument("replicate: k must be non-negative");
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>((2 * k + 1) * (2 * k + 1)));
  for (int i = -k; i <= k; ++i) {
    for (int j = -k; j <= k; ++j) {
      out.push_back({p.x + i, p.y + j});
    }
  }
  return out;
}

inline std::vector<Vec2> replicate(const Point2& p, int k) { return replicate(p.vec(), k); }

/// Maps an angle to [-pi, pi).
inline double normalize_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("normalize_angle: non-finite angle");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = theta - two_pi * std::floor((theta + std::numbers::pi) / two_pi);
  if (a >= std::numbers::pi) a -= two_pi;
  if (a < -std::numbers::pi) a += two_pi;
  return a;
}

/// Smallest absolute difference between two angles, in [0, pi].
inline double angular_distance(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

}  // namespace pursuit

#endif  // PURSUIT_TORUS_HPP
