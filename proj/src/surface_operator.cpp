#include "degen/surface_operator.hpp"

#include "degen/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace degen {

double SurfaceOperatorMatrix::norm() const {
  if (eigenvalues.size() == 0) return 0.0;
  return std::max(std::abs(eigenvalues.minCoeff()), std::abs(eigenvalues.maxCoeff()));
}

Eigen::VectorXcd SurfaceOperatorMatrix::eigenfunction(Eigen::Index j) const {
  Eigen::VectorXcd psi = eigenvectors.col(j);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    psi[i] /= std::sqrt(mesh.weights[static_cast<std::size_t>(i)]);
  }
  return psi;
}

Eigen::MatrixXcd SurfaceOperatorMatrix::eigenfunctions(Eigen::Index count) const {
  Eigen::MatrixXcd psi(eigenvectors.rows(), count);
  for (Eigen::Index j = 0; j < count; ++j) psi.col(j) = eigenfunction(j);
  return psi;
}

SurfaceOperatorMatrix assemble_pair_kernel(const SurfaceMesh& mesh, const PairKernel& kernel) {
  const auto M = static_cast<Eigen::Index>(mesh.size());
  SurfaceOperatorMatrix op;
  op.mesh = mesh;
  op.matrix.resize(M, M);
  std::vector<double> root(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) root[i] = std::sqrt(mesh.weights[i]);

#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < M; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    for (Eigen::Index i = 0; i < M; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      op.matrix(i, j) = root[ii] * kernel(ii, jj) * root[jj];
    }
  }

  const Eigen::MatrixXcd adjoint = op.matrix.adjoint();
  op.hermiticity_defect = M > 0 ? (op.matrix - adjoint).cwiseAbs().maxCoeff() : 0.0;
  const double scale = M > 0 ? std::max(1.0, op.matrix.cwiseAbs().maxCoeff()) : 1.0;
  if (op.hermiticity_defect > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "surface operator is not Hermitian: max |A - A*| = " << op.hermiticity_defect
        << " (check the Fourier convention of the kernel)";
    throw ConsistencyError(msg.str());
  }
  op.matrix = 0.5 * (op.matrix + adjoint);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix);
  if (solver.info() != Eigen::Success) throw ConsistencyError("dense Hermitian eigensolver failed");
  op.eigenvalues = solver.eigenvalues();
  op.eigenvectors = solver.eigenvectors();
  return op;
}

SurfaceOperatorMatrix assemble(const SurfaceMesh& mesh,
                               const std::function<std::complex<double>(const Point&)>& kernel) {
  return assemble_pair_kernel(mesh, [&](std::size_t i, std::size_t j) {
    return kernel(mesh.nodes[i] - mesh.nodes[j]);
  });
}

SurfaceOperatorMatrix assemble(const SurfaceMesh& mesh, const Potential& potential) {
  if (mesh.dimension != potential.dimension()) {
    throw PreconditionError("mesh and potential dimensions differ");
  }
  return assemble(mesh, [&potential](const Point& k) { return potential.fourier(k); });
}

std::vector<double> circulant_oracle(const SurfaceMesh& mesh,
                                     const std::function<std::complex<double>(const Point&)>& kernel) {
  if (!mesh.is_uniform_circle()) {
    throw PreconditionError("circulant oracle needs a uniform circle mesh");
  }
  const int M = static_cast<int>(mesh.size());
  const double w = mesh.weights.front();
  auto* row = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * M));
  for (int j = 0; j < M; ++j) {
    const std::complex<double> entry = w * kernel(mesh.nodes[0] - mesh.nodes[static_cast<std::size_t>(j)]);
    row[j][0] = entry.real();
    row[j][1] = entry.imag();
  }
  fftw_plan plan = fftw_plan_dft_1d(M, row, row, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  std::vector<double> spectrum(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) spectrum[static_cast<std::size_t>(j)] = row[j][0];
  fftw_destroy_plan(plan);
  fftw_free(row);
  std::sort(spectrum.begin(), spectrum.end());
  return spectrum;
}

std::vector<double> circulant_oracle(const SurfaceMesh& mesh, const Potential& potential) {
  if (mesh.dimension != 2 || potential.dimension() != 2) {
    throw PreconditionError("circulant oracle is two-dimensional");
  }
  if (!potential.is_radial()) throw PreconditionError("circulant oracle needs a radial potential");
  return circulant_oracle(mesh, [&potential](const Point& k) { return potential.fourier(k); });
}

double default_negative_threshold(const SurfaceOperatorMatrix& op) {
  return 1e-8 * std::max(1.0, op.norm());
}

int count_negative(const Eigen::VectorXd& eigenvalues, double threshold) {
  if (!(threshold > 0.0)) throw PreconditionError("count_negative: threshold must be positive");
  int count = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < -threshold) ++count;
  }
  return count;
}

int count_negative(const SurfaceOperatorMatrix& op, std::optional<double> threshold) {
  return count_negative(op.eigenvalues, threshold.value_or(default_negative_threshold(op)));
}

PointMatrixResult point_matrix_test(const Potential& potential, const std::vector<Point>& points,
                                    double tolerance, std::optional<double> surface_radius) {
  const std::size_t N = points.size();
  if (N == 0) throw PreconditionError("point_matrix_test needs at least one point");
  double scale = 0.0;
  for (const Point& p : points) scale = std::max(scale, p.norm());
  scale = std::max(scale, 1.0);
  for (std::size_t j = 0; j < N; ++j) {
    if (surface_radius && std::abs(points[j].norm() - *surface_radius) > 1e-9 * scale) {
      throw PreconditionError("point_matrix_test: point off the surface of extrema");
    }
    for (std::size_t k = 0; k < j; ++k) {
      if ((points[j] - points[k]).norm() <= 1e-12 * scale) {
        throw PreconditionError("point_matrix_test: duplicated points");
      }
    }
  }
  PointMatrixResult result;
  const auto n = static_cast<Eigen::Index>(N);
  result.matrix.resize(n, n);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k < N; ++k) {
      result.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          potential.fourier(points[j] - points[k]);
    }
  }
  const Eigen::MatrixXcd hermitian = 0.5 * (result.matrix + result.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  result.eigenvalues = solver.eigenvalues();
  result.negative_definite = result.eigenvalues.maxCoeff() < -tolerance;
  return result;
}

nlohmann::json to_json(const SurfaceOperatorMatrix& op, double threshold, const Potential& potential) {
  std::vector<double> values(op.eigenvalues.data(), op.eigenvalues.data() + op.eigenvalues.size());
  return {{"mesh_size", op.mesh.size()},
          {"eigenvalues", values},
          {"negative_count", count_negative(op, threshold)},
          {"threshold", threshold},
          {"potential", potential.describe()}};
}

}  // namespace degen
