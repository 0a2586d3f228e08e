#include "degen/symbols.hpp"

#include "degen/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace degen {

namespace {

void require_dimension(int dimension) {
  if (dimension != 2 && dimension != 3) {
    throw ConfigError("symbol dimension must be 2 or 3, got " + std::to_string(dimension));
  }
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("symbol parameter '") + name + "' must be positive and finite");
  }
}

// Below this |p^2 - mu| the BCS quotient is replaced by its Taylor series.
constexpr double kBcsSeriesBand = 1e-6;

double bcs_profile(double r, double mu, double beta) {
  const double x = r * r - mu;
  if (std::abs(x) < kBcsSeriesBand) {
    // x coth(beta x / 2) is even in x.
    return 2.0 / beta + beta * x * x / 6.0;
  }
  return x / std::tanh(0.5 * beta * x);
}

}  // namespace

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Roton:
      return "roton";
    case SymbolKind::Bcs:
      return "bcs";
    case SymbolKind::MexicanHat:
      return "mexican-hat";
    case SymbolKind::CustomRadial:
      return "custom-radial";
  }
  return "unknown";
}

SymbolKind symbol_kind_from_string(const std::string& name) {
  if (name == "roton") return SymbolKind::Roton;
  if (name == "bcs") return SymbolKind::Bcs;
  if (name == "mexican-hat") return SymbolKind::MexicanHat;
  if (name == "custom-radial") return SymbolKind::CustomRadial;
  throw ConfigError("unknown symbol kind '" + name + "'");
}

RadialSpline::RadialSpline(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
  const std::size_t n = radii_.size();
  if (n < 4 || values_.size() != n) {
    throw ConfigError("custom-radial profile needs at least 4 (radius, value) pairs of equal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(radii_[i]) || !std::isfinite(values_[i])) {
      throw ConfigError("custom-radial profile contains non-finite entries");
    }
    if (i > 0 && !(radii_[i] > radii_[i - 1])) {
      throw ConfigError("custom-radial radii must be strictly increasing");
    }
  }
  if (radii_.front() < 0.0) throw ConfigError("custom-radial radii must be nonnegative");

  // Natural end conditions, Thomas algorithm on the interior knots.
  curvature_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = radii_[i] - radii_[i - 1];
    const double h1 = radii_[i + 1] - radii_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double lower = radii_[i] - radii_[i - 1];
    const double factor = lower / diag[i - 1];
    diag[i] -= factor * upper[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    curvature_[i] = (rhs[i] - upper[i] * curvature_[i + 1]) / diag[i];
    if (i == 1) break;
  }
}

std::size_t RadialSpline::segment(double r) const {
  if (!(r >= radii_.front()) || r > radii_.back()) {
    throw InvalidInput("custom-radial profile evaluated at |p| = " + std::to_string(r) +
                       " outside its tabulated range");
  }
  auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  std::size_t i = static_cast<std::size_t>(std::distance(radii_.begin(), it));
  if (i == 0) i = 1;
  if (i >= radii_.size()) i = radii_.size() - 1;
  return i - 1;
}

double RadialSpline::value(double r) const {
  const std::size_t i = segment(r);
  const double h = radii_[i + 1] - radii_[i];
  const double a = (radii_[i + 1] - r) / h;
  const double b = (r - radii_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * curvature_[i] + (b * b * b - b) * curvature_[i + 1]) * h * h / 6.0;
}

double RadialSpline::derivative(double r) const {
  const std::size_t i = segment(r);
  const double h = radii_[i + 1] - radii_[i];
  const double a = (radii_[i + 1] - r) / h;
  const double b = (r - radii_[i]) / h;
  return (values_[i + 1] - values_[i]) / h -
         (3.0 * a * a - 1.0) / 6.0 * h * curvature_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * curvature_[i + 1];
}

double RadialSpline::second_derivative(double r) const {
  const std::size_t i = segment(r);
  const double h = radii_[i + 1] - radii_[i];
  const double a = (radii_[i + 1] - r) / h;
  const double b = (r - radii_[i]) / h;
  return a * curvature_[i] + b * curvature_[i + 1];
}

DispersionSymbol::DispersionSymbol(int dimension, SymbolKind kind,
                                   std::map<std::string, double> params)
    : dimension_(dimension), kind_(kind), params_(std::move(params)) {
  require_dimension(dimension);
}

DispersionSymbol DispersionSymbol::roton(int dimension, double gap, double mass, double p0) {
  require_positive(gap, "delta");
  require_positive(mass, "mu");
  require_positive(p0, "p0");
  return {dimension, SymbolKind::Roton, {{"delta", gap}, {"mu", mass}, {"p0", p0}}};
}

DispersionSymbol DispersionSymbol::bcs(int dimension, double mu, double beta) {
  require_positive(mu, "mu");
  require_positive(beta, "beta");
  return {dimension, SymbolKind::Bcs, {{"mu", mu}, {"beta", beta}}};
}

DispersionSymbol DispersionSymbol::mexican_hat(int dimension, double p0) {
  require_positive(p0, "p0");
  return {dimension, SymbolKind::MexicanHat, {{"p0", p0}}};
}

DispersionSymbol DispersionSymbol::custom_radial(int dimension, std::vector<double> radii,
                                                 std::vector<double> values) {
  DispersionSymbol symbol(dimension, SymbolKind::CustomRadial, {});
  symbol.spline_ = std::make_shared<const RadialSpline>(std::move(radii), std::move(values));
  return symbol;
}

double DispersionSymbol::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw ConfigError("symbol has no parameter '" + key + "'");
  return it->second;
}

double DispersionSymbol::radial(double r) const {
  if (!std::isfinite(r)) throw InvalidInput("symbol evaluated at a non-finite radius");
  switch (kind_) {
    case SymbolKind::Roton: {
      const double d = r - params_.at("p0");
      return params_.at("delta") + d * d / (2.0 * params_.at("mu"));
    }
    case SymbolKind::Bcs:
      return bcs_profile(r, params_.at("mu"), params_.at("beta"));
    case SymbolKind::MexicanHat: {
      const double d = r - params_.at("p0");
      return d * d;
    }
    case SymbolKind::CustomRadial:
      return spline_->value(r);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DispersionSymbol::operator()(const Point& p) const {
  if (!is_finite(p)) throw InvalidInput("symbol evaluated at a non-finite point");
  return radial(p.norm());
}

SymbolMinimum find_minimum(const DispersionSymbol& symbol) {
  double upper = 0.0;
  switch (symbol.kind()) {
    case SymbolKind::Roton:
    case SymbolKind::MexicanHat:
      upper = 2.0 * symbol.param("p0") + 1.0;
      break;
    case SymbolKind::Bcs:
      upper = 2.0 * std::sqrt(symbol.param("mu")) + 1.0;
      break;
    case SymbolKind::CustomRadial:
      upper = symbol.spline()->max_radius();
      break;
  }
  const double lower = symbol.kind() == SymbolKind::CustomRadial ? symbol.spline()->radii().front() : 0.0;

  // Coarse scan to bracket the global minimiser, then Brent inside the bracket.
  constexpr int kScan = 2048;
  const double step = (upper - lower) / kScan;
  int best = 0;
  double best_value = symbol.radial(lower);
  for (int i = 1; i <= kScan; ++i) {
    const double v = symbol.radial(lower + step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = lower + step * std::max(best - 1, 0);
  const double hi = std::min(upper, lower + step * (best + 1));
  const auto profile = [&symbol](double r) { return symbol.radial(r); };
  const auto [radius, value] = boost::math::tools::brent_find_minima(
      profile, lo, hi, std::numeric_limits<double>::digits);
  SymbolMinimum result{value, radius};

  switch (symbol.kind()) {
    case SymbolKind::Roton:
      result = {symbol.param("delta"), symbol.param("p0")};
      break;
    case SymbolKind::Bcs:
      result = {2.0 / symbol.param("beta"), std::sqrt(symbol.param("mu"))};
      break;
    case SymbolKind::MexicanHat:
      result = {0.0, symbol.param("p0")};
      break;
    case SymbolKind::CustomRadial: {
      // Newton on the spline derivative pins the minimiser to rounding level.
      const RadialSpline& spline = *symbol.spline();
      double r = result.radius;
      for (int iter = 0; iter < 50; ++iter) {
        const double curvature = spline.second_derivative(r);
        if (!(curvature > 0.0)) break;
        const double next = std::clamp(r - spline.derivative(r) / curvature, lo, hi);
        if (std::abs(next - r) <= 1e-15 * std::max(1.0, std::abs(r))) {
          r = next;
          break;
        }
        r = next;
      }
      if (spline.value(r) <= result.value) result = {spline.value(r), r};
      break;
    }
  }

  const double scale = std::max(upper, 1.0);
  if (result.radius <= 1e-9 * scale) {
    throw DegenerateSurface("symbol attains its minimum at the origin; no hypersurface of extrema");
  }
  return result;
}

double radial_curvature(const DispersionSymbol& symbol, double radius) {
  if (symbol.kind() == SymbolKind::CustomRadial) {
    return symbol.spline()->second_derivative(radius);
  }
  const double h = 1e-4 * std::max(radius, 1.0);
  return (symbol.radial(radius + h) - 2.0 * symbol.radial(radius) + symbol.radial(radius - h)) / (h * h);
}

}  // namespace degen
