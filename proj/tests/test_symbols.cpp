#include "degen/errors.hpp"
#include "degen/symbols.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace degen;

namespace {

Point random_direction(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Point p = Point::Zero();
  for (int d = 0; d < dim; ++d) p[d] = g(rng);
  return p / p.norm();
}

}  // namespace

TEST_CASE("symbol evaluation at reference points") {
  CHECK(DispersionSymbol::roton(2, 1.0, 1.0, 2.0)(planar(0.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(DispersionSymbol::bcs(2, 1.0, 2.0)(planar(1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(DispersionSymbol::mexican_hat(2, 1.0)(planar(3.0, 0.0)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(DispersionSymbol::mexican_hat(3, 1.0)(Point(0.0, 0.0, 0.5)) == doctest::Approx(0.25));
}

TEST_CASE("bcs near its removable singularity is smooth and even in p^2 - mu") {
  const auto bcs = DispersionSymbol::bcs(2, 1.0, 2.0);
  for (double x : {1e-3, 1e-5, 1e-7, 1e-9}) {
    const double above = bcs.radial(std::sqrt(1.0 + x));
    const double below = bcs.radial(std::sqrt(1.0 - x));
    // x coth(beta x / 2) = 2/beta + beta x^2 / 6 + O(x^4)
    CHECK(std::abs(above - (1.0 + x * x / 3.0)) < 1e-12);
    CHECK(std::abs(above - below) < 1e-12);
  }
  CHECK(bcs.radial(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("non-finite input is rejected") {
  const auto s = DispersionSymbol::mexican_hat(2, 1.0);
  CHECK_THROWS_AS((void)s(planar(std::numeric_limits<double>::quiet_NaN(), 0.0)), InvalidInput);
  CHECK_THROWS_AS((void)s(planar(std::numeric_limits<double>::infinity(), 0.0)), InvalidInput);
}

TEST_CASE("parameters must be positive") {
  CHECK_THROWS_AS(DispersionSymbol::roton(2, 1.0, -1.0, 2.0), ConfigError);
  CHECK_THROWS_AS(DispersionSymbol::bcs(2, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(DispersionSymbol::mexican_hat(2, 0.0), ConfigError);
  CHECK_THROWS_AS(DispersionSymbol::mexican_hat(4, 1.0), ConfigError);
}

TEST_CASE("minima of the built-in kinds") {
  auto check = [](const DispersionSymbol& s, double m, double r) {
    const SymbolMinimum min = find_minimum(s);
    CHECK(min.value == doctest::Approx(m).epsilon(1e-12));
    CHECK(min.radius == doctest::Approx(r).epsilon(1e-12));
  };
  check(DispersionSymbol::bcs(2, 4.0, 1.0), 2.0, 2.0);
  check(DispersionSymbol::mexican_hat(2, 1.5), 0.0, 1.5);
  // The minimum of the roton symbol is the gap, not zero.
  check(DispersionSymbol::roton(3, 0.7, 0.3, 1.9), 0.7, 1.9);
}

TEST_CASE("roton minimiser agrees with a plain scan of the radial profile") {
  const auto s = DispersionSymbol::roton(2, 0.7, 0.3, 1.9);
  double best = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (int i = 1; i <= 100000; ++i) {
    const double r = 10.0 * i / 100000.0;
    if (s.radial(r) < best) {
      best = s.radial(r);
      arg = r;
    }
  }
  CHECK(std::abs(arg - find_minimum(s).radius) <= 1e-4);
  CHECK(std::abs(best - find_minimum(s).value) <= 1e-8);
}

TEST_CASE("symbols are bounded below by m and radial") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> radius(0.0, 6.0);
  for (const auto& s : {DispersionSymbol::roton(2, 0.7, 0.3, 1.9), DispersionSymbol::bcs(3, 1.0, 2.0),
                        DispersionSymbol::mexican_hat(3, 1.0)}) {
    const SymbolMinimum min = find_minimum(s);
    CHECK(std::abs(s.radial(min.radius) - min.value) <= 1e-12);
    for (int i = 0; i < 10000; ++i) {
      const double r = radius(rng);
      const Point p = r * random_direction(rng, s.dimension());
      const double v = s(p);
      REQUIRE(v >= min.value - 1e-12);
      if (i % 100 == 0) {
        const Point q = r * random_direction(rng, s.dimension());
        CHECK(std::abs(s(q) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
      }
    }
    CHECK(s.radial(1e3) > s.radial(10.0));
  }
}

TEST_CASE("quadratic growth off the surface") {
  for (const auto& s : {DispersionSymbol::roton(2, 0.7, 0.3, 1.9), DispersionSymbol::bcs(2, 1.0, 2.0),
                        DispersionSymbol::mexican_hat(2, 1.0)}) {
    const SymbolMinimum min = find_minimum(s);
    const double c = 1.5 * radial_curvature(s, min.radius);
    for (int i = -20; i <= 20; ++i) {
      const double t = 0.1 * min.radius * i / 20.0;
      CHECK(s.radial(min.radius + t) - min.value <= c * t * t + 1e-14);
    }
  }
  CHECK(radial_curvature(DispersionSymbol::mexican_hat(2, 1.0), 1.0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("custom radial profile") {
  std::vector<double> r;
  std::vector<double> v;
  for (int i = 0; i <= 60; ++i) {
    r.push_back(0.05 * i);
    v.push_back(std::pow(0.05 * i - 1.2, 2) + 0.3);
  }
  const auto s = DispersionSymbol::custom_radial(2, r, v);
  const SymbolMinimum min = find_minimum(s);
  CHECK(min.value == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(min.radius == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(s(planar(0.0, 2.0)) == doctest::Approx(0.94).epsilon(1e-6));
  CHECK_THROWS_AS((void)s(planar(3.5, 0.0)), InvalidInput);
}

TEST_CASE("a minimiser at the origin is degenerate") {
  const auto s = DispersionSymbol::custom_radial(2, {0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 4.0, 9.0});
  CHECK_THROWS_AS(find_minimum(s), DegenerateSurface);
}
