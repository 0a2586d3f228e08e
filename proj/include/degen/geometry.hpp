#pragma once

#include <Eigen/Core>

#include <cmath>

namespace degen {

/// Point in momentum or position space. Two-dimensional problems keep the
/// third coordinate at zero, so norms and differences need no special casing.
using Point = Eigen::Vector3d;

inline bool is_finite(const Point& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

inline Point planar(double x, double y) { return Point(x, y, 0.0); }

/// Surface area of the origin-centred sphere of the given radius in
/// `dimension` ambient dimensions (circumference for the circle).
inline double sphere_measure(int dimension, double radius) {
  return dimension == 2 ? 2.0 * M_PI * radius : 4.0 * M_PI * radius * radius;
}

}  // namespace degen
