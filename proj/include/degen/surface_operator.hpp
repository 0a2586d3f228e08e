#pragma once

#include "degen/potentials.hpp"
#include "degen/surface.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace degen {

/// Weight-symmetrised discretisation A_ij = sqrt(w_i) K_ij sqrt(w_j) of an
/// integral operator on L^2(S, omega), fully diagonalised.
struct SurfaceOperatorMatrix {
  SurfaceMesh mesh;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // orthonormal columns
  double hermiticity_defect = 0.0;  // max |A - A^*| before symmetrisation

  /// Spectral norm max |lambda|.
  [[nodiscard]] double norm() const;
  /// Psi_j(s_i) = (eigvec_j)_i / sqrt(w_i), normalised in L^2(S, omega).
  [[nodiscard]] Eigen::VectorXcd eigenfunction(Eigen::Index j) const;
  /// First `count` eigenfunctions as columns.
  [[nodiscard]] Eigen::MatrixXcd eigenfunctions(Eigen::Index count) const;
};

/// Kernel K(s_i, s_j) addressed by mesh node indices.
using PairKernel = std::function<std::complex<double>(std::size_t, std::size_t)>;

/// Builds and diagonalises sqrt(w_i) K(i, j) sqrt(w_j). Throws ConsistencyError
/// when the assembled matrix is not Hermitian to 1e-12 relative accuracy.
SurfaceOperatorMatrix assemble_pair_kernel(const SurfaceMesh& mesh, const PairKernel& kernel);

/// Kernel V^(s - s'), the surface operator of the potential.
SurfaceOperatorMatrix assemble(const SurfaceMesh& mesh, const Potential& potential);

/// Convolution kernel given directly as a function of s - s'.
SurfaceOperatorMatrix assemble(const SurfaceMesh& mesh,
                               const std::function<std::complex<double>(const Point&)>& kernel);

/// Spectrum of the circulant matrix of a radial kernel on a uniform circle
/// mesh: w times the DFT of the first row, sorted ascending.
std::vector<double> circulant_oracle(const SurfaceMesh& mesh, const Potential& potential);
std::vector<double> circulant_oracle(const SurfaceMesh& mesh,
                                     const std::function<std::complex<double>(const Point&)>& kernel);

/// 1e-8 * max(1, ||A||)
double default_negative_threshold(const SurfaceOperatorMatrix& op);

/// Number of eigenvalues below -threshold.
int count_negative(const SurfaceOperatorMatrix& op, std::optional<double> threshold = std::nullopt);
int count_negative(const Eigen::VectorXd& eigenvalues, double threshold);

struct PointMatrixResult {
  Eigen::MatrixXcd matrix;       // V^(s_j - s_k)
  Eigen::VectorXd eigenvalues;   // ascending
  bool negative_definite = false;
};

/// Matrix (V^(s_j - s_k)) over distinct points; negative definite iff its
/// largest eigenvalue is below -tolerance. When `surface_radius` is given all
/// points must lie on that origin-centred sphere.
PointMatrixResult point_matrix_test(const Potential& potential, const std::vector<Point>& points,
                                    double tolerance,
                                    std::optional<double> surface_radius = std::nullopt);

/// {mesh_size, eigenvalues, negative_count, threshold, potential}
nlohmann::json to_json(const SurfaceOperatorMatrix& op, double threshold, const Potential& potential);

}  // namespace degen
