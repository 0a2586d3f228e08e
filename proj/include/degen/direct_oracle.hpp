#pragma once

#include "degen/lanczos.hpp"
#include "degen/potentials.hpp"
#include "degen/symbols.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace degen {

struct OracleOptions {
  double box_edge = 40.0;
  int samples = 256;
  /// Counting buffer below m, in units of level_spacing().
  double delta_levels = 3.0;
};

/// H = H0(-i grad) + V on the periodic box [-L/2, L/2)^n with G samples per
/// edge. H0 is diagonal on the dual lattice p = 2 pi j / L, V on the grid.
class GridHamiltonian {
 public:
  GridHamiltonian(const DispersionSymbol& symbol, const Potential& potential,
                  const OracleOptions& options);
  ~GridHamiltonian();
  GridHamiltonian(const GridHamiltonian&) = delete;
  GridHamiltonian& operator=(const GridHamiltonian&) = delete;

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] double box_edge() const { return box_edge_; }
  [[nodiscard]] int samples() const { return samples_; }
  [[nodiscard]] std::size_t size() const { return potential_table_.size(); }

  /// Symbol values on the full dual lattice, in the same row-major order as
  /// the grid (FFT frequency order along each axis).
  [[nodiscard]] const std::vector<double>& symbol_table() const { return symbol_table_; }
  [[nodiscard]] const std::vector<double>& potential_table() const { return potential_table_; }
  [[nodiscard]] double symbol_at(std::size_t index) const { return symbol_table_[index]; }
  /// Dual-lattice momentum of a flat index.
  [[nodiscard]] Point momentum(std::size_t index) const;
  /// Grid position of a flat index.
  [[nodiscard]] Point position(std::size_t index) const;

  /// Minimum m and extremum radius of the continuum symbol.
  [[nodiscard]] double bottom() const { return bottom_; }
  [[nodiscard]] double surface_radius() const { return surface_radius_; }
  /// Lowest transverse standing-wave excitation of the box near the surface,
  /// (H0''(R) / 2) (pi / L)^2.
  [[nodiscard]] double level_spacing() const { return level_spacing_; }
  /// delta_levels * level_spacing()
  [[nodiscard]] double delta() const { return delta_; }
  /// max |H0| on the lattice + max |V|, an upper bound on ||H||.
  [[nodiscard]] double spectral_scale() const { return spectral_scale_; }
  /// 2 pi / L <= R / 8 holds.
  [[nodiscard]] bool surface_resolved() const { return surface_resolved_; }
  [[nodiscard]] bool potential_is_zero() const { return potential_is_zero_; }

  /// out = IFFT(H0 FFT(in)) + V in for real grid vectors.
  void apply(std::span<const double> in, std::span<double> out) const;
  /// Complex variant.
  void apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// Column-wise real apply, for the block eigensolver.
  void apply_block(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const;

 private:
  struct Plans;

  int dimension_;
  double box_edge_;
  int samples_;
  std::vector<double> symbol_table_;
  std::vector<double> half_symbol_;  // symbol on the r2c half spectrum, pre-divided by N
  std::vector<double> potential_table_;
  double bottom_ = 0.0;
  double surface_radius_ = 0.0;
  double level_spacing_ = 0.0;
  double delta_ = 0.0;
  double spectral_scale_ = 0.0;
  bool surface_resolved_ = false;
  bool potential_is_zero_ = false;
  std::unique_ptr<Plans> plans_;
};

struct OracleSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;
  double tolerance = 0.0;
  long matvecs = 0;
  int restarts = 0;
  bool exact = false;  // V = 0: read straight off the symbol table
};

/// k smallest eigenvalues (k <= 64), residuals below 1e-8 * spectral_scale.
/// Throws ConvergenceError with a residual report when the budget runs out.
OracleSpectrum lowest_eigenvalues(const GridHamiltonian& hamiltonian, int k,
                                  LanczosOptions options = {});

struct BoundStateCount {
  int count = 0;
  double energy = 0.0;
  bool lower_bound = false;  // k_max reached with every tracked value below energy
  OracleSpectrum spectrum;
};

/// Number of converged eigenvalues strictly below `energy` (default m - delta).
BoundStateCount count_below(const GridHamiltonian& hamiltonian, std::optional<double> energy = std::nullopt,
                            int k_max = 32, LanczosOptions options = {});

nlohmann::json to_json(const GridHamiltonian& hamiltonian, const BoundStateCount& count);

}  // namespace degen
