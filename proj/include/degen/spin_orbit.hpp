#pragma once

#include "degen/potentials.hpp"
#include "degen/rayleigh_ritz.hpp"
#include "degen/surface.hpp"
#include "degen/surface_operator.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace degen {

enum class SpinOrbitKind { Rashba, Dresselhaus };

std::string to_string(SpinOrbitKind kind);
SpinOrbitKind spin_orbit_kind_from_string(const std::string& name);

/// Two-band symbol H0(p) = [[p^2, a(p)], [conj a(p), p^2]] in two dimensions,
/// a(p) = alpha (p2 + i p1) for Rashba and -alpha (p1 + i p2) for Dresselhaus.
class MatrixSymbol {
 public:
  static MatrixSymbol rashba(double alpha);
  static MatrixSymbol dresselhaus(double alpha);

  [[nodiscard]] SpinOrbitKind kind() const { return kind_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] int dimension() const { return 2; }

  [[nodiscard]] std::complex<double> off_diagonal(const Point& p) const;
  [[nodiscard]] Eigen::Matrix2cd operator()(const Point& p) const;
  /// p^2 - |a(p)|
  [[nodiscard]] double lower_band(const Point& p) const;
  /// p^2 + |a(p)|
  [[nodiscard]] double upper_band(const Point& p) const;
  /// -alpha^2 / 4
  [[nodiscard]] double bottom() const { return -0.25 * alpha_ * alpha_; }
  /// |alpha| / 2
  [[nodiscard]] double surface_radius() const { return 0.5 * std::abs(alpha_); }

 private:
  MatrixSymbol(SpinOrbitKind kind, double alpha);

  SpinOrbitKind kind_;
  double alpha_;
};

struct BandDecomposition {
  double lower = 0.0;
  double upper = 0.0;
  /// Unit lower-band eigenvector, first component real and nonnegative.
  Eigen::Vector2cd u;
};

/// Closed-form eigen-decomposition. Throws PreconditionError at p = 0, where
/// the lower-band eigenvector is not defined.
BandDecomposition band_decompose(const MatrixSymbol& symbol, const Point& p);

/// Lower-band vectors u(s_i) at the mesh nodes.
std::vector<Eigen::Vector2cd> band_frame(const MatrixSymbol& symbol, const SurfaceMesh& mesh);

/// Multiplies each frame vector by exp(i phase_i).
std::vector<Eigen::Vector2cd> rephase(const std::vector<Eigen::Vector2cd>& frame,
                                      const std::vector<double>& phases);

/// Kernel V^(s_i - s_j) <u_i, u_j> on a mesh of the band-minimum circle.
SurfaceOperatorMatrix assemble_spin_kernel(const SurfaceMesh& mesh, const std::vector<Eigen::Vector2cd>& frame,
                                           const Potential& potential);
SurfaceOperatorMatrix assemble_spin_kernel(const MatrixSymbol& symbol, const SurfaceMesh& mesh,
                                           const Potential& potential);

/// Rayleigh–Ritz ingredients for the lower band: excess lambda_1 - m and
/// kernel V^(p - q) <u(p), u(q)>.
FormModel spin_form_model(const MatrixSymbol& symbol, const Potential& potential, double potential_scale = 1.0);

/// Certifies `count` eigenvalues of H below -alpha^2/4 from the spin surface operator.
Certificate certify_spin(const MatrixSymbol& symbol, const Potential& potential, const SurfaceMesh& mesh,
                         int count, const CertifyOptions& options = {});

}  // namespace degen
