#pragma once

#include "degen/geometry.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace degen {

enum class PotentialKind { Zero, GaussianWell, BallWell, GaussianDimpleMix, Tabulated };
enum class SignFlag { Nonpositive, Nonnegative, SignChanging, Unknown };

std::string to_string(PotentialKind kind);
std::string to_string(SignFlag flag);

/// Real potential sampled on the centred hypercube [-L/2, L/2)^n, G samples per
/// edge, row-major with the last coordinate fastest. Node i sits at -L/2 + i L/G.
struct PotentialGrid {
  int dimension = 2;
  double box_edge = 0.0;
  int samples = 0;
  std::vector<double> values;

  [[nodiscard]] double spacing() const { return box_edge / samples; }
  [[nodiscard]] std::size_t point_count() const;
};

/// Grid files: a text header line "dimension box_edge samples" followed by the
/// values, or the binary layout "DGRD" | int32 dimension | float64 box_edge |
/// int32 samples | float64 values..., little-endian.
PotentialGrid read_potential_grid(const std::filesystem::path& path);
void write_potential_grid(const std::filesystem::path& path, const PotentialGrid& grid,
                          bool binary = false);

/// Real-valued V in L^1(R^n) with its Fourier transform
///   V^(k) = (2 pi)^(-n/2) \int V(x) exp(-i <k, x>) dx.
/// Cheap to copy; the underlying model is shared and immutable.
class Potential {
 public:
  class Model;

  explicit Potential(std::shared_ptr<const Model> model);

  [[nodiscard]] double operator()(const Point& x) const;
  [[nodiscard]] std::complex<double> fourier(const Point& k) const;
  /// \int V(x) dx
  [[nodiscard]] double integral() const;

  [[nodiscard]] int dimension() const;
  [[nodiscard]] PotentialKind kind() const;
  [[nodiscard]] SignFlag sign() const;
  /// True when V depends on |x| only (so V^ depends on |k| only).
  [[nodiscard]] bool is_radial() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] nlohmann::json describe() const;

 private:
  std::shared_ptr<const Model> model_;
};

class Potential::Model {
 public:
  virtual ~Model() = default;
  [[nodiscard]] virtual double value(const Point& x) const = 0;
  [[nodiscard]] virtual std::complex<double> fourier(const Point& k) const = 0;
  [[nodiscard]] virtual double integral() const = 0;
  [[nodiscard]] virtual int dimension() const = 0;
  [[nodiscard]] virtual PotentialKind kind() const = 0;
  [[nodiscard]] virtual SignFlag sign() const = 0;
  [[nodiscard]] virtual bool is_radial() const = 0;
  [[nodiscard]] virtual nlohmann::json params() const = 0;
};

Potential zero_potential(int dimension);
/// V(x) = -depth exp(-|x|^2 / (2 width^2)), depth >= 0.
Potential gaussian_well(int dimension, double depth, double width);
/// V(x) = -depth on |x| <= radius, 0 outside, depth >= 0.
Potential ball_well(int dimension, double depth, double radius);
/// Wide attractive Gaussian plus a narrow repulsive one at the origin:
/// V(x) = -well_depth exp(-|x|^2/(2 well_width^2)) + dimple_height exp(-|x|^2/(2 dimple_width^2)).
Potential gaussian_dimple_mix(int dimension, double well_depth, double well_width,
                              double dimple_height, double dimple_width);

struct TabulatedOptions {
  /// Largest |k| at which the caller will query V^. Must not exceed the
  /// resolved band pi / (2 h), h = grid spacing.
  double band_radius = 0.0;
  /// Zero-padding factor of the FFT; interpolation is 4-point Lagrange per axis.
  int oversample = 0;  // 0 picks 8 in 2-D and 4 in 3-D
};

/// Grid potential; V^ from a zero-padded FFT with per-axis cubic interpolation.
/// Queries beyond the resolved band throw OutOfBand.
Potential tabulated_potential(PotentialGrid grid, const TabulatedOptions& options);

/// Sample any potential on a centred grid (the oracle and tests use this).
PotentialGrid sample_potential(const Potential& potential, double box_edge, int samples);

}  // namespace degen
