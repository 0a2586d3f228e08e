#pragma once

#include "degen/geometry.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace degen {

enum class SymbolKind { Roton, Bcs, MexicanHat, CustomRadial };

std::string to_string(SymbolKind kind);
SymbolKind symbol_kind_from_string(const std::string& name);

/// Natural cubic spline through tabulated (radius, value) pairs.
class RadialSpline {
 public:
  RadialSpline(std::vector<double> radii, std::vector<double> values);

  [[nodiscard]] double value(double r) const;
  [[nodiscard]] double derivative(double r) const;
  [[nodiscard]] double second_derivative(double r) const;

  [[nodiscard]] const std::vector<double>& radii() const { return radii_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double max_radius() const { return radii_.back(); }

 private:
  [[nodiscard]] std::size_t segment(double r) const;

  std::vector<double> radii_;
  std::vector<double> values_;
  std::vector<double> curvature_;  // second derivative at the knots
};

/// Scalar Fourier symbol H0(p) of a radial free Hamiltonian in two or three
/// dimensions. Immutable once built.
class DispersionSymbol {
 public:
  /// Delta + (|p| - p0)^2 / (2 mu)
  static DispersionSymbol roton(int dimension, double gap, double mass, double p0);
  /// (p^2 - mu) coth(beta (p^2 - mu) / 2)
  static DispersionSymbol bcs(int dimension, double mu, double beta);
  /// (|p| - p0)^2
  static DispersionSymbol mexican_hat(int dimension, double p0);
  /// Cubic-spline profile through tabulated radii; evaluation beyond the last
  /// radius is rejected.
  static DispersionSymbol custom_radial(int dimension, std::vector<double> radii,
                                        std::vector<double> values);

  /// H0(p). Throws InvalidInput on non-finite coordinates.
  [[nodiscard]] double operator()(const Point& p) const;
  /// Radial profile H0 as a function of |p|.
  [[nodiscard]] double radial(double r) const;

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] SymbolKind kind() const { return kind_; }
  [[nodiscard]] const std::map<std::string, double>& params() const { return params_; }
  [[nodiscard]] double param(const std::string& key) const;
  [[nodiscard]] const RadialSpline* spline() const { return spline_.get(); }

 private:
  DispersionSymbol(int dimension, SymbolKind kind, std::map<std::string, double> params);

  int dimension_;
  SymbolKind kind_;
  std::map<std::string, double> params_;
  std::shared_ptr<const RadialSpline> spline_;
};

struct SymbolMinimum {
  double value;   // m = min H0
  double radius;  // radius of the extremum sphere
};

/// Minimum value and minimising radius. The radial profile is minimised by a
/// bracketed Brent search; kinds with closed forms then substitute them.
/// Throws DegenerateSurface when the minimiser is the origin.
SymbolMinimum find_minimum(const DispersionSymbol& symbol);

/// Second radial derivative of the profile at `radius`.
double radial_curvature(const DispersionSymbol& symbol, double radius);

}  // namespace degen
