#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace degen {

/// Y = H X for a block of column vectors.
using BlockOperator = std::function<void(const Eigen::MatrixXd& in, Eigen::MatrixXd& out)>;

struct LanczosOptions {
  /// Block width; must be at least the largest eigenvalue multiplicity that
  /// should be resolved.
  int block_size = 2;
  /// Ritz vectors kept across a restart beyond the wanted count (0 = auto).
  int extra_kept = 0;
  /// Block steps between restarts.
  int steps_per_cycle = 32;
  int max_restarts = 4000;
  /// Residual tolerance relative to `spectral_scale`.
  double tolerance = 1e-8;
  /// Upper bound on ||H||; sets the absolute residual tolerance.
  double spectral_scale = 1.0;
  std::uint64_t seed = 0x6c616e637a6f73ULL;
};

struct RitzSnapshot {
  const Eigen::VectorXd& values;     // ascending
  const Eigen::VectorXd& residuals;  // ||H x - theta x|| for each Ritz pair
  double tolerance;                  // absolute
};

/// Returns true once the iteration may stop.
using StopRule = std::function<bool(const RitzSnapshot&)>;

struct LanczosResult {
  std::vector<double> values;     // Ritz values tracked at exit, ascending
  std::vector<double> residuals;
  double tolerance = 0.0;         // absolute
  int restarts = 0;
  long matvecs = 0;
  bool converged = false;
};

/// Thick-restart block Lanczos with full reorthogonalisation for the lowest
/// part of the spectrum of a real symmetric operator of size n. `wanted` Ritz
/// pairs are tracked; the iteration stops when `stop` accepts a snapshot or
/// the restart budget runs out (converged = false).
LanczosResult block_lanczos(const BlockOperator& op, Eigen::Index n, int wanted, const StopRule& stop,
                            const LanczosOptions& options);

/// Stop rule: the first k Ritz pairs have residuals below tolerance.
StopRule lowest_converged(int k);

}  // namespace degen
