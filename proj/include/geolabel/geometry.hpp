#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geolabel/rational.hpp"

namespace geolabel {

// Planar predicates templated on the coordinate scalar. Rational is the
// general case; std::int64_t coordinates (bounded to ~40 bits) evaluate in
// __int128 and serve the brute-force oracles.

template <class T>
struct WideOf {
  using type = T;
};
template <>
struct WideOf<std::int64_t> {
  using type = __int128;
};
template <class T>
using Wide = typename WideOf<T>::type;

template <class T>
struct Point2T {
  T x{};
  T y{};
  friend bool operator==(const Point2T&, const Point2T&) = default;
};

using Point2 = Point2T<Rational>;

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

/// Sign of the signed area of (a, b, c): +1 for a left turn.
template <class T>
int orient(const Point2T<T>& a, const Point2T<T>& b, const Point2T<T>& c) {
  using W = Wide<T>;
  W lhs = W(b.x - a.x) * W(c.y - a.y);
  W rhs = W(b.y - a.y) * W(c.x - a.x);
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

/// c lies on the closed segment ab, given that a, b, c are collinear.
template <class T>
bool on_collinear_segment(const Point2T<T>& a, const Point2T<T>& b, const Point2T<T>& c) {
  auto lo_x = a.x < b.x ? a.x : b.x, hi_x = a.x < b.x ? b.x : a.x;
  auto lo_y = a.y < b.y ? a.y : b.y, hi_y = a.y < b.y ? b.y : a.y;
  return lo_x <= c.x && c.x <= hi_x && lo_y <= c.y && c.y <= hi_y;
}

/// Closed segments ab and cd share at least one point.
template <class T>
bool segments_intersect(const Point2T<T>& a, const Point2T<T>& b, const Point2T<T>& c,
                        const Point2T<T>& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_collinear_segment(a, b, c)) return true;
  if (o2 == 0 && on_collinear_segment(a, b, d)) return true;
  if (o3 == 0 && on_collinear_segment(c, d, a)) return true;
  if (o4 == 0 && on_collinear_segment(c, d, b)) return true;
  return false;
}

/// Interiors cross at a single point (no touching, no collinear overlap).
template <class T>
bool segments_properly_cross(const Point2T<T>& a, const Point2T<T>& b, const Point2T<T>& c,
                             const Point2T<T>& d) {
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

/// Closed polygon membership (boundary counts as inside), by winding number.
template <class T>
bool point_in_closed_polygon(std::span<const Point2T<T>> poly, const Point2T<T>& p) {
  const std::size_t n = poly.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    int o = orient(a, b, p);
    if (o == 0 && on_collinear_segment(a, b, p)) return true;
    if (a.y <= p.y) {
      if (b.y > p.y && o > 0) ++winding;
    } else if (b.y <= p.y && o < 0) {
      --winding;
    }
  }
  return winding != 0;
}

/// Twice the signed area.
template <class T>
Wide<T> twice_signed_area(std::span<const Point2T<T>> poly) {
  Wide<T> acc = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    acc += Wide<T>(a.x) * Wide<T>(b.y) - Wide<T>(b.x) * Wide<T>(a.y);
  }
  return acc;
}

/// Pairwise test of non-adjacent edges; O(n^2).
template <class T>
bool is_simple_polygon(std::span<const Point2T<T>> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = poly[i];
      const auto& b = poly[(i + 1) % n];
      const auto& c = poly[j];
      const auto& d = poly[(j + 1) % n];
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Consecutive edges may only share their common vertex.
        const auto& shared = (j == i + 1) ? b : a;
        const auto& p = (j == i + 1) ? a : b;
        const auto& q = (j == i + 1) ? d : c;
        if (orient(p, shared, q) == 0) {
          // Collinear consecutive edges fold back onto each other unless
          // they continue in the same direction.
          if (on_collinear_segment(shared, p, q) || on_collinear_segment(shared, q, p)) return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

/// Integer view of a rational point set when a small common denominator exists.
std::optional<std::vector<Point2T<std::int64_t>>> scaled_points(std::span<const Point2> pts,
                                                                std::int64_t extra_factor = 1);

}  // namespace geolabel
