#include "degen/surface.hpp"

#include "degen/errors.hpp"
#include "degen/quadrature.hpp"

#include <cmath>
#include <numeric>

namespace degen {

double SurfaceMesh::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool SurfaceMesh::is_uniform_circle() const {
  if (dimension != 2 || nodes.empty()) return false;
  const double w = weights.front();
  const double M = static_cast<double>(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (weights[i] != w) return false;
    const double angle = 2.0 * M_PI * static_cast<double>(i) / M;
    const Point expected = planar(radius * std::cos(angle), radius * std::sin(angle));
    if ((nodes[i] - expected).norm() > 1e-12 * radius) return false;
  }
  return true;
}

SurfaceMesh build_mesh(double surface_radius, int dimension, int resolution) {
  if (!(surface_radius > 0.0) || !std::isfinite(surface_radius)) {
    throw ConfigError("surface radius must be positive");
  }
  if (resolution < 4) throw ConfigError("surface.resolution must be at least 4");
  if (dimension != 2 && dimension != 3) throw ConfigError("surface dimension must be 2 or 3");

  SurfaceMesh mesh;
  mesh.dimension = dimension;
  mesh.radius = surface_radius;
  const double R = surface_radius;

  if (dimension == 2) {
    const auto M = static_cast<std::size_t>(resolution);
    mesh.polar = 1;
    mesh.azimuth = resolution;
    mesh.nodes.reserve(M);
    mesh.weights.assign(M, 2.0 * M_PI * R / static_cast<double>(resolution));
    for (std::size_t i = 0; i < M; ++i) {
      const double angle = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(resolution);
      mesh.nodes.push_back(planar(R * std::cos(angle), R * std::sin(angle)));
    }
    return mesh;
  }

  const QuadratureRule rule = gauss_legendre(resolution);
  const int azimuth = 2 * resolution;
  mesh.polar = resolution;
  mesh.azimuth = azimuth;
  const double dphi = 2.0 * M_PI / azimuth;
  for (std::size_t a = 0; a < rule.size(); ++a) {
    const double cos_theta = rule.nodes[a];
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    for (int b = 0; b < azimuth; ++b) {
      const double phi = dphi * b;
      mesh.nodes.emplace_back(R * sin_theta * std::cos(phi), R * sin_theta * std::sin(phi),
                              R * cos_theta);
      mesh.weights.push_back(R * R * rule.weights[a] * dphi);
    }
  }
  return mesh;
}

TubularChart::TubularChart(SurfaceMesh mesh, double half_width)
    : mesh_(std::move(mesh)), half_width_(half_width) {
  if (!(half_width > 0.0) || !(half_width < mesh_.radius)) {
    throw PreconditionError("tubular chart half-width must satisfy 0 < r < R");
  }
}

double TubularChart::jacobian(double t) const {
  const double stretch = (mesh_.radius + t) / mesh_.radius;
  return mesh_.dimension == 2 ? stretch : stretch * stretch;
}

TubularChart tubular_chart(const SurfaceMesh& mesh, double half_width_fraction) {
  if (!(half_width_fraction > 0.0) || half_width_fraction > 0.5) {
    throw PreconditionError("surface.half_width_fraction must lie in (0, 0.5]");
  }
  return {mesh, half_width_fraction * mesh.radius};
}

}  // namespace degen
