#pragma once

#include <qconc/error.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace qconc {

struct Point {
  double x;
  double y;
};

/// Continuous piecewise-linear function through sorted knots; constant
/// extension outside [front.x, back.x].
class PiecewiseLinear {
 public:
  explicit PiecewiseLinear(std::vector<Point> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw error(errc::domain_error, "piecewise-linear function needs at least one knot");
    for (std::size_t k = 1; k < knots_.size(); ++k)
      if (!(knots_[k].x > knots_[k - 1].x))
        throw error(errc::domain_error, "knots must have strictly increasing x (index " + std::to_string(k) + ")");
  }

  const std::vector<Point>& knots() const { return knots_; }

  double operator()(double x) const {
    if (x <= knots_.front().x) return knots_.front().y;
    if (x >= knots_.back().x) return knots_.back().y;
    const auto hi = std::upper_bound(knots_.begin(), knots_.end(), x, [](double v, const Point& p) { return v < p.x; });
    const auto lo = hi - 1;
    const double t = (x - lo->x) / (hi->x - lo->x);
    return lo->y + t * (hi->y - lo->y);
  }

  /// Slopes never decrease by more than tol.
  bool is_convex(double tol = 1e-12) const {
    for (std::size_t k = 2; k < knots_.size(); ++k) {
      const double s0 = slope(k - 2);
      const double s1 = slope(k - 1);
      if (s1 - s0 < -tol * std::max(1.0, std::abs(s0))) return false;
    }
    return true;
  }

  /// Slope of segment k (between knots k and k+1).
  double slope(std::size_t k) const {
    return (knots_[k + 1].y - knots_[k].y) / (knots_[k + 1].x - knots_[k].x);
  }

 private:
  std::vector<Point> knots_;
};

/// Indices of the lower convex hull of points sorted by strictly increasing
/// x (Andrew's monotone chain). Collinear interior points are dropped.
inline std::vector<std::size_t> lower_hull_indices(std::span<const Point> pts) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull.size() >= 2) {
      const Point& a = pts[hull[hull.size() - 2]];
      const Point& b = pts[hull.back()];
      const Point& c = pts[i];
      const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

inline PiecewiseLinear lower_convex_envelope(std::span<const Point> pts) {
  std::vector<Point> knots;
  for (std::size_t i : lower_hull_indices(pts)) knots.push_back(pts[i]);
  return PiecewiseLinear(std::move(knots));
}

}  // namespace qconc
