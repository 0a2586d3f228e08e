#include "degen/lanczos.hpp"

#include "degen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace degen {

namespace {

// Orthonormalise the columns of W against themselves (V is assumed already
// projected out). Rank-deficient columns are replaced with random directions
// orthogonal to V and to the accepted columns; their R entries stay zero.
Eigen::MatrixXd orthonormalize_block(Eigen::MatrixXd& W, const Eigen::Ref<const Eigen::MatrixXd>& V,
                                     std::mt19937_64& rng) {
  const Eigen::Index b = W.cols();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(b, b);
  std::normal_distribution<double> gauss;
  for (Eigen::Index c = 0; c < b; ++c) {
    const double original = W.col(c).norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < c; ++p) {
        const double coeff = W.col(p).dot(W.col(c));
        R(p, c) += coeff;
        W.col(c) -= coeff * W.col(p);
      }
    }
    double nu = W.col(c).norm();
    if (nu > 1e-10 * original && nu > 0.0) {
      R(c, c) = nu;
      W.col(c) /= nu;
      continue;
    }
    // Deflated direction.
    for (Eigen::Index p = 0; p < c; ++p) R(p, c) = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd v(W.rows());
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
      for (int pass = 0; pass < 2; ++pass) {
        if (V.cols() > 0) v -= V * (V.transpose() * v);
        for (Eigen::Index p = 0; p < c; ++p) v -= W.col(p).dot(v) * W.col(p);
      }
      nu = v.norm();
      if (nu > 1e-8) {
        W.col(c) = v / nu;
        break;
      }
    }
  }
  return R;
}

}  // namespace

StopRule lowest_converged(int k) {
  return [k](const RitzSnapshot& s) {
    if (s.values.size() < k) return false;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!(s.residuals[i] <= s.tolerance)) return false;
    }
    return true;
  };
}

LanczosResult block_lanczos(const BlockOperator& op, Eigen::Index n, int wanted, const StopRule& stop,
                            const LanczosOptions& options) {
  if (wanted < 1) throw PreconditionError("block_lanczos: wanted must be positive");
  if (options.block_size < 1) throw PreconditionError("block_lanczos: block size must be positive");
  const Eigen::Index b = options.block_size;
  const Eigen::Index extra = options.extra_kept > 0 ? options.extra_kept
                                                    : std::max<Eigen::Index>(2 * b, wanted / 2);
  const Eigen::Index keep = std::min<Eigen::Index>(wanted + extra, n);
  Eigen::Index capacity = keep + static_cast<Eigen::Index>(options.steps_per_cycle) * b;
  capacity = std::min(capacity, n);
  if (capacity < keep + b && capacity < n) throw PreconditionError("block_lanczos: basis too small");

  LanczosResult result;
  result.tolerance = options.tolerance * options.spectral_scale;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;

  Eigen::MatrixXd V(n, capacity);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(capacity, capacity);
  Eigen::MatrixXd pending(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) pending(i, j) = gauss(rng);
  }
  Eigen::MatrixXd coupling = orthonormalize_block(pending, V.leftCols(0), rng);
  Eigen::MatrixXd W(n, b);
  Eigen::Index cols = 0;

  for (int cycle = 0;; ++cycle) {
    // Expand the Krylov basis one block at a time.
    while (cols + b <= capacity) {
      const Eigen::Index current = cols;
      V.middleCols(current, b) = pending;
      cols += b;
      op(pending, W);
      result.matvecs += b;
      const auto basis = V.leftCols(cols);
      // The three-term part (current and previous block) carries almost all of
      // V^T W; removing it first lets the full pass decide cheaply whether a
      // second sweep over the basis is needed.
      const Eigen::Index local_start = std::max<Eigen::Index>(0, current - b);
      const auto local = V.middleCols(local_start, cols - local_start);
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(cols, b);
      C.bottomRows(cols - local_start) = local.transpose() * W;
      W.noalias() -= local * C.bottomRows(cols - local_start);
      const Eigen::VectorXd before = W.colwise().norm();
      Eigen::MatrixXd C1 = basis.transpose() * W;
      W.noalias() -= basis * C1;
      C += C1;
      const Eigen::VectorXd after = W.colwise().norm();
      if ((after.array() < M_SQRT1_2 * before.array()).any()) {
        const Eigen::MatrixXd C2 = basis.transpose() * W;
        W.noalias() -= basis * C2;
        C += C2;
      }
      T.block(0, current, cols, b) = C;
      T.block(current, 0, b, cols) = C.transpose();
      pending = W;
      coupling = orthonormalize_block(pending, basis, rng);
    }

    const Eigen::MatrixXd projected = 0.5 * (T.topLeftCorner(cols, cols) +
                                             T.topLeftCorner(cols, cols).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected);
    const Eigen::VectorXd& theta = ritz.eigenvalues();
    const Eigen::MatrixXd& Y = ritz.eigenvectors();
    // H V = V T + P B E^T, so the residual of V y is ||B (E^T y)||.
    const Eigen::Index tracked = std::min(keep, cols);
    Eigen::VectorXd values = theta.head(tracked);
    Eigen::VectorXd residuals(tracked);
    for (Eigen::Index i = 0; i < tracked; ++i) {
      residuals[i] = (coupling * Y.block(cols - b, i, b, 1)).norm();
    }

    const bool done = stop(RitzSnapshot{values, residuals, result.tolerance});
    if (done || cycle >= options.max_restarts || cols >= n) {
      result.values.assign(values.data(), values.data() + values.size());
      result.residuals.assign(residuals.data(), residuals.data() + residuals.size());
      result.restarts = cycle;
      result.converged = done || cols >= n;
      return result;
    }

    // Thick restart: keep the lowest Ritz vectors, continue from the residual block.
    const Eigen::MatrixXd X = V.leftCols(cols) * Y.leftCols(tracked);
    V.leftCols(tracked) = X;
    T.setZero();
    T.topLeftCorner(tracked, tracked) = theta.head(tracked).asDiagonal();
    cols = tracked;
  }
}

}  // namespace degen
