#include "degen/errors.hpp"
#include "degen/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace degen;

namespace {

std::vector<Point> random_points(int dim, double scale, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point p = Point::Zero();
    for (int d = 0; d < dim; ++d) p[d] = u(rng);
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("closed-form transforms at the origin") {
  CHECK(gaussian_well(2, 1.0, 1.0).fourier(Point::Zero()).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(gaussian_well(3, 2.0, 0.5).fourier(Point::Zero()).real() == doctest::Approx(-0.25).epsilon(1e-15));
}

TEST_CASE("ball well in two dimensions at |k| = 1 matches brute-force quadrature") {
  // From tests/oracles/reference_values.py (adaptive 2-D quadrature over the disc).
  const double reference = -4.4005058574493688e-01;
  const Potential ball = ball_well(2, 1.0, 1.0);
  CHECK(std::abs(ball.fourier(planar(1.0, 0.0)).real() - reference) < 1e-12);
  CHECK(std::abs(ball.fourier(planar(0.6, 0.8)).real() - reference) < 1e-12);
}

TEST_CASE("integrals") {
  CHECK(gaussian_well(2, 1.0, 1.0).integral() == doctest::Approx(-2.0 * M_PI).epsilon(1e-14));
  CHECK(ball_well(3, 1.0, 1.0).integral() == doctest::Approx(-4.0 * M_PI / 3.0).epsilon(1e-14));
  // Cancelling mix: well_depth * well_width^n = dimple_height * dimple_width^n.
  const Potential mix = gaussian_dimple_mix(2, 1.0, 1.0, 4.0, 0.5);
  CHECK(std::abs(mix.integral()) < 1e-14);
  CHECK(mix.sign() == SignFlag::SignChanging);
  CHECK(zero_potential(3).integral() == 0.0);
}

TEST_CASE("transform at zero is the normalised integral, and the transform is real and even") {
  for (const Potential& v : {gaussian_well(2, 1.3, 0.7), gaussian_well(3, 2.0, 0.5), ball_well(2, 0.8, 1.4),
                             ball_well(3, 1.0, 1.0), gaussian_dimple_mix(2, 1.0, 1.5, 1.5, 0.5),
                             gaussian_dimple_mix(3, 1.0, 1.5, 1.5, 0.5)}) {
    const int n = v.dimension();
    CHECK(std::abs(v.fourier(Point::Zero()).real() - std::pow(2.0 * M_PI, -0.5 * n) * v.integral()) < 1e-10);
    for (const Point& k : random_points(n, 6.0, 200, 3)) {
      const auto a = v.fourier(k);
      const auto b = v.fourier(-k);
      CHECK(std::abs(a - std::conj(b)) < 1e-15);
      CHECK(std::abs(a.imag()) <= 1e-12);
      // Bochner: a nonpositive V has |V^(k)| <= |V^(0)|.
      if (v.sign() == SignFlag::Nonpositive) CHECK(std::abs(a) <= std::abs(v.fourier(Point::Zero())) + 1e-15);
    }
  }
}

TEST_CASE("ball well transform is continuous through its small-argument series") {
  for (int n : {2, 3}) {
    const Potential ball = ball_well(n, 1.0, 1.0);
    for (double q : {1e-4, 9.9e-4, 1.01e-3, 9.9e-3, 1.01e-2}) {
      const double a = ball.fourier(planar(q, 0.0)).real();
      const double b = ball.fourier(planar(q * (1 + 1e-9), 0.0)).real();
      CHECK(std::abs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("gaussian well transform agrees with direct real-space quadrature") {
  const Potential v = gaussian_well(2, 1.0, 1.0);
  const int g = 200;
  const double half = 10.0;
  const double h = 2.0 * half / g;
  for (const Point& k : {planar(0.0, 0.0), planar(1.0, 0.0), planar(0.7, -1.3)}) {
    std::complex<double> sum = 0.0;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        const Point x = planar(-half + (i + 0.5) * h, -half + (j + 0.5) * h);
        sum += v(x) * std::exp(std::complex<double>(0.0, -k.dot(x)));
      }
    }
    sum *= h * h / (2.0 * M_PI);
    CHECK(std::abs(sum - v.fourier(k)) < 1e-10);
  }
}

TEST_CASE("tabulated gaussian well converges to the closed form on its band") {
  for (int n : {2, 3}) {
    const Potential exact = gaussian_well(n, 1.0, 1.0);
    const int samples = n == 2 ? 64 : 32;
    const double edge = n == 2 ? 24.0 : 16.0;
    const double band = M_PI / (2.0 * edge / samples);
    const Potential tab = tabulated_potential(sample_potential(exact, edge, samples), TabulatedOptions{band, 0});
    // Doubling the zero padding halves the spacing of the interpolated transform.
    const Potential fine =
        tabulated_potential(sample_potential(exact, edge, samples), TabulatedOptions{band, n == 2 ? 16 : 6});
    CHECK(tab.sign() == SignFlag::Nonpositive);
    CHECK(std::abs(tab.integral() - exact.integral()) < 1e-8);
    double worst = 0.0;
    double worst_fine = 0.0;
    for (const Point& k : random_points(n, band / std::sqrt(static_cast<double>(n)), 300, 5)) {
      worst = std::max(worst, std::abs(tab.fourier(k) - exact.fourier(k)));
      worst_fine = std::max(worst_fine, std::abs(fine.fourier(k) - exact.fourier(k)));
    }
    MESSAGE("n = " << n << ": transform error " << worst << ", with finer padding " << worst_fine);
    CHECK(worst < 1e-4);
    // Cubic interpolation in k: a finer transform grid gains close to its fourth power.
    CHECK(worst_fine < worst * (n == 2 ? 1.0 / 8.0 : 0.5));
    Point outside = Point::Zero();
    outside[0] = 1.01 * band;
    CHECK_THROWS_AS((void)tab.fourier(outside), OutOfBand);
  }
}

TEST_CASE("tabulated construction refuses a band beyond the grid's resolution") {
  const PotentialGrid grid = sample_potential(gaussian_well(2, 1.0, 1.0), 10.0, 16);
  CHECK_THROWS_AS(tabulated_potential(grid, TabulatedOptions{10.0, 0}), ConfigError);
}

TEST_CASE("grid files round-trip in text and binary form") {
  const PotentialGrid grid = sample_potential(gaussian_dimple_mix(2, 1.0, 1.5, 1.5, 0.5), 12.0, 8);
  const auto dir = std::filesystem::temp_directory_path();
  for (bool binary : {false, true}) {
    const auto path = dir / (binary ? "degen_grid_test.bin" : "degen_grid_test.txt");
    write_potential_grid(path, grid, binary);
    const PotentialGrid back = read_potential_grid(path);
    CHECK(back.dimension == 2);
    CHECK(back.samples == 8);
    CHECK(back.box_edge == 12.0);
    REQUIRE(back.values.size() == grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) CHECK(back.values[i] == grid.values[i]);
    std::filesystem::remove(path);
  }
}

TEST_CASE("invalid potential parameters") {
  CHECK_THROWS_AS(gaussian_well(2, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(gaussian_well(2, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(ball_well(4, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS((void)gaussian_well(2, 1.0, 1.0).fourier(planar(NAN, 0.0)), InvalidInput);
}
