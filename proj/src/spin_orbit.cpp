#include "degen/spin_orbit.hpp"

#include "degen/errors.hpp"

#include <cmath>
#include <sstream>

namespace degen {

namespace {

void check_mesh(const MatrixSymbol& symbol, const SurfaceMesh& mesh) {
  const double radius = symbol.surface_radius();
  if (mesh.dimension != 2 || std::abs(mesh.radius - radius) > 1e-12 * std::max(1.0, radius)) {
    std::ostringstream msg;
    msg << "spin-orbit mesh must be the circle |p| = |alpha|/2 = " << radius;
    throw PreconditionError(msg.str());
  }
}

}  // namespace

std::string to_string(SpinOrbitKind kind) {
  return kind == SpinOrbitKind::Rashba ? "rashba" : "dresselhaus";
}

SpinOrbitKind spin_orbit_kind_from_string(const std::string& name) {
  if (name == "rashba") return SpinOrbitKind::Rashba;
  if (name == "dresselhaus") return SpinOrbitKind::Dresselhaus;
  throw ConfigError("unknown spin_orbit.kind '" + name + "' (expected rashba or dresselhaus)");
}

MatrixSymbol::MatrixSymbol(SpinOrbitKind kind, double alpha) : kind_(kind), alpha_(alpha) {
  if (!std::isfinite(alpha) || alpha == 0.0) throw InvalidInput("spin-orbit coupling alpha must be finite and nonzero");
}

MatrixSymbol MatrixSymbol::rashba(double alpha) { return {SpinOrbitKind::Rashba, alpha}; }
MatrixSymbol MatrixSymbol::dresselhaus(double alpha) { return {SpinOrbitKind::Dresselhaus, alpha}; }

std::complex<double> MatrixSymbol::off_diagonal(const Point& p) const {
  if (!is_finite(p)) throw InvalidInput("momentum has non-finite coordinates");
  if (kind_ == SpinOrbitKind::Rashba) return alpha_ * std::complex<double>(p[1], p[0]);
  return -alpha_ * std::complex<double>(p[0], p[1]);
}

Eigen::Matrix2cd MatrixSymbol::operator()(const Point& p) const {
  const std::complex<double> a = off_diagonal(p);
  const double p2 = p.head<2>().squaredNorm();
  Eigen::Matrix2cd h;
  h << p2, a, std::conj(a), p2;
  return h;
}

double MatrixSymbol::lower_band(const Point& p) const { return p.head<2>().squaredNorm() - std::abs(off_diagonal(p)); }
double MatrixSymbol::upper_band(const Point& p) const { return p.head<2>().squaredNorm() + std::abs(off_diagonal(p)); }

BandDecomposition band_decompose(const MatrixSymbol& symbol, const Point& p) {
  const std::complex<double> a = symbol.off_diagonal(p);
  const double modulus = std::abs(a);
  if (modulus == 0.0) throw PreconditionError("band decomposition is singular at p = 0");
  BandDecomposition band;
  const double p2 = p.head<2>().squaredNorm();
  band.lower = p2 - modulus;
  band.upper = p2 + modulus;
  band.u << M_SQRT1_2, -std::conj(a) / modulus * M_SQRT1_2;
  return band;
}

std::vector<Eigen::Vector2cd> band_frame(const MatrixSymbol& symbol, const SurfaceMesh& mesh) {
  std::vector<Eigen::Vector2cd> frame;
  frame.reserve(mesh.size());
  for (const Point& s : mesh.nodes) frame.push_back(band_decompose(symbol, s).u);
  return frame;
}

std::vector<Eigen::Vector2cd> rephase(const std::vector<Eigen::Vector2cd>& frame, const std::vector<double>& phases) {
  if (phases.size() != frame.size()) throw PreconditionError("one phase per frame vector is required");
  std::vector<Eigen::Vector2cd> out(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out[i] = std::polar(1.0, phases[i]) * frame[i];
  return out;
}

SurfaceOperatorMatrix assemble_spin_kernel(const SurfaceMesh& mesh, const std::vector<Eigen::Vector2cd>& frame,
                                           const Potential& potential) {
  if (mesh.dimension != 2 || potential.dimension() != 2) {
    throw PreconditionError("spin-orbit kernels are two-dimensional");
  }
  if (frame.size() != mesh.size()) throw PreconditionError("one frame vector per mesh node is required");
  return assemble_pair_kernel(mesh, [&](std::size_t i, std::size_t j) {
    return potential.fourier(mesh.nodes[i] - mesh.nodes[j]) * frame[i].dot(frame[j]);
  });
}

SurfaceOperatorMatrix assemble_spin_kernel(const MatrixSymbol& symbol, const SurfaceMesh& mesh,
                                           const Potential& potential) {
  check_mesh(symbol, mesh);
  return assemble_spin_kernel(mesh, band_frame(symbol, mesh), potential);
}

FormModel spin_form_model(const MatrixSymbol& symbol, const Potential& potential, double potential_scale) {
  if (potential.dimension() != 2) throw PreconditionError("spin-orbit potentials are two-dimensional");
  FormModel model;
  model.dimension = 2;
  const double m = symbol.bottom();
  model.excess = [symbol, m](const Point& p) { return symbol.lower_band(p) - m; };
  model.pair_kernel = [symbol, potential](const Point& p, const Point& q) {
    return potential.fourier(p - q) * band_decompose(symbol, p).u.dot(band_decompose(symbol, q).u);
  };
  model.potential_scale = potential_scale;
  return model;
}

Certificate certify_spin(const MatrixSymbol& symbol, const Potential& potential, const SurfaceMesh& mesh, int count,
                         const CertifyOptions& options) {
  check_mesh(symbol, mesh);
  if (options.half_width_fraction >= 1.0) throw PreconditionError("the tube must avoid p = 0");
  return certify_operator(spin_form_model(symbol, potential, options.potential_scale),
                          assemble_spin_kernel(symbol, mesh, potential), count, options);
}

}  // namespace degen
