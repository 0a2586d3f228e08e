#pragma once

#include "degen/geometry.hpp"

#include <vector>

namespace degen {

/// Quadrature on an origin-centred circle (n = 2) or sphere (n = 3).
struct SurfaceMesh {
  int dimension = 2;
  double radius = 1.0;
  std::vector<Point> nodes;
  std::vector<double> weights;
  // Product-grid shape: circles use polar = 1, azimuth = M.
  int polar = 1;
  int azimuth = 0;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  [[nodiscard]] double total_weight() const;
  /// True for the equally spaced, equally weighted circle meshes built by build_mesh.
  [[nodiscard]] bool is_uniform_circle() const;
};

/// n = 2: `resolution` equally spaced angles starting at 0, weights 2 pi R / M.
/// n = 3: `resolution` Gauss–Legendre nodes in cos(theta) times
/// 2 * resolution uniform azimuths.
SurfaceMesh build_mesh(double surface_radius, int dimension, int resolution);

/// Tubular neighbourhood p = s + t n(s), |t| < half_width, of an origin-centred
/// sphere, with n(s) = s / |s|.
class TubularChart {
 public:
  TubularChart(SurfaceMesh mesh, double half_width);

  [[nodiscard]] const SurfaceMesh& mesh() const { return mesh_; }
  [[nodiscard]] double half_width() const { return half_width_; }

  [[nodiscard]] Point normal(const Point& s) const { return s / s.norm(); }
  /// L(s, t) = s + t n(s)
  [[nodiscard]] Point map(const Point& s, double t) const { return s + t * normal(s); }
  [[nodiscard]] Point map(std::size_t node, double t) const { return map(mesh_.nodes[node], t); }
  /// Volume Jacobian rho(s, t) = ((R + t) / R)^(n - 1); independent of s.
  [[nodiscard]] double jacobian(double t) const;

 private:
  SurfaceMesh mesh_;
  double half_width_;
};

constexpr double kDefaultHalfWidthFraction = 0.25;

/// Chart with half-width r = fraction * R; fraction must lie in (0, 0.5].
TubularChart tubular_chart(const SurfaceMesh& mesh,
                           double half_width_fraction = kDefaultHalfWidthFraction);

}  // namespace degen
