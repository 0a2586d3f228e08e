#include "degen/direct_oracle.hpp"
#include "degen/errors.hpp"
#include "degen/rayleigh_ritz.hpp"

#include <doctest.h>

#include <cmath>

using namespace degen;

namespace {

Eigen::VectorXcd angular_mode(const SurfaceMesh& mesh, int m, bool sine = false) {
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double angle = std::atan2(mesh.nodes[i][1], mesh.nodes[i][0]);
    psi[static_cast<Eigen::Index>(i)] = (sine ? std::sin(m * angle) : std::cos(m * angle)) / std::sqrt(M_PI * mesh.radius);
  }
  return psi;
}

const DispersionSymbol kHat = DispersionSymbol::mexican_hat(2, 1.0);

}  // namespace

TEST_CASE("transverse profile") {
  const TransverseProfile profile(12);
  double integral = 0.0;
  for (std::size_t a = 0; a < profile.rule().size(); ++a) integral += profile.rule().weights[a] * profile.values()[a];
  CHECK(std::abs(integral - 1.0) < 1e-10);
  CHECK(profile(1.0) == 0.0);
  CHECK(profile(-1.0) == 0.0);
  CHECK(profile(0.0) > 0.0);
  // The exactly normalised bump has c = 1 / \int exp(-1/(1-u^2)) du = 2.2522836...
  CHECK(profile.normalization() == doctest::Approx(2.2522836).epsilon(1e-4));
}

TEST_CASE("kinetic form is positive and linear in eps for the mexican hat") {
  const SurfaceMesh mesh = build_mesh(1.0, 2, 64);
  const TubularChart chart = tubular_chart(mesh, 0.25);
  const FormModel model = scalar_form_model(kHat, zero_potential(2));
  const TransverseProfile profile;
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(64);
  double previous = 0.0;
  for (double f : {0.2, 0.1, 0.05}) {
    const auto k = kinetic_form(model, chart, one, one, profile, f);
    CHECK(k.real() > 0.0);
    CHECK(std::abs(k.imag()) < 1e-15);
    if (previous > 0.0) CHECK(k.real() / previous == doctest::Approx(0.5).epsilon(0.2));
    previous = k.real();
  }
}

TEST_CASE("kinetic form vanishes between orthogonal profiles and for a flat symbol") {
  const SurfaceMesh mesh = build_mesh(1.0, 2, 64);
  const TubularChart chart = tubular_chart(mesh, 0.25);
  const TransverseProfile profile;
  const FormModel model = scalar_form_model(kHat, zero_potential(2));
  CHECK(std::abs(kinetic_form(model, chart, angular_mode(mesh, 2), angular_mode(mesh, 2, true), profile, 0.1)) < 1e-10);
  CHECK(std::abs(kinetic_form(model, chart, angular_mode(mesh, 1), angular_mode(mesh, 3), profile, 0.1)) < 1e-10);

  const DispersionSymbol flat = DispersionSymbol::custom_radial(2, {0.0, 1.0, 2.0, 3.0}, {1.0, 1.0, 1.0, 1.0});
  FormModel flat_model = model;
  flat_model.excess = [flat](const Point& p) { return flat(p) - 1.0; };
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(64);
  CHECK(std::abs(kinetic_form(flat_model, chart, one, one, profile, 0.2)) < 1e-14);
}

TEST_CASE("transverse fractions outside (0, 1] are rejected") {
  const SurfaceMesh mesh = build_mesh(1.0, 2, 16);
  const TubularChart chart = tubular_chart(mesh, 0.25);
  const FormModel model = scalar_form_model(kHat, gaussian_well(2, 1.0, 1.0));
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(16);
  CHECK_THROWS_AS(kinetic_form(model, chart, one, one, TransverseProfile(), 1.5), PreconditionError);
  CHECK_THROWS_AS(potential_form(model, chart, one, one, TransverseProfile(), 0.0), PreconditionError);
}

TEST_CASE("potential form: zero, constant kernel and the eps -> 0 limit") {
  const SurfaceMesh mesh = build_mesh(1.0, 2, 64);
  const TubularChart chart = tubular_chart(mesh, 0.25);
  const TransverseProfile profile;
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(64) / std::sqrt(2.0 * M_PI);

  const FormModel none = scalar_form_model(kHat, zero_potential(2));
  CHECK(std::abs(potential_form(none, chart, one, one, profile, 0.1)) == 0.0);

  const double v = 0.8;
  FormModel constant = none;
  constant.pair_kernel = [v](const Point&, const Point&) { return std::complex<double>(-v); };
  for (double f : {0.2, 0.05}) {
    CHECK(std::abs(potential_form(constant, chart, one, one, profile, f) - (-2.0 * M_PI * v)) < 1e-10);
  }

  const Potential well = gaussian_well(2, 1.0, 1.0);
  const FormModel model = scalar_form_model(kHat, well);
  const SurfaceOperatorMatrix op = assemble(mesh, well);
  const Eigen::MatrixXcd psi = op.eigenfunctions(3);
  double previous = 0.0;
  for (double f : {0.2, 0.1, 0.05}) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < 3; ++j) {
      for (Eigen::Index k = 0; k < 3; ++k) {
        const auto value = potential_form(model, chart, psi.col(j), psi.col(k), profile, f);
        const double limit = j == k ? op.eigenvalues[j] : 0.0;
        worst = std::max(worst, std::abs(value - limit));
      }
    }
    CHECK(worst <= 0.1 * f);
    if (previous > 0.0) CHECK(worst < previous);
    previous = worst;
  }
}

TEST_CASE("certificates") {
  const Potential well = gaussian_well(2, 1.0, 1.0);
  const SurfaceMesh mesh = build_mesh(1.0, 2, 64);

  const Certificate one = certify(kHat, well, mesh, 1);
  REQUIRE(one.steps.size() == 4);
  CHECK(one.steps.back().h(0, 0).real() < 0.0);
  CHECK(one.certified);
  CHECK(one.certified_count == 1);

  const Certificate three = certify(kHat, well, mesh, 3);
  CHECK(three.certified);
  CHECK(three.monotone);
  CHECK(*three.largest_fraction == 0.2);
  for (std::size_t i = 1; i < three.steps.size(); ++i) {
    CHECK(three.steps[i].deviation <= three.steps[i - 1].deviation);
    CHECK(three.steps[i].deviation / three.steps[i - 1].deviation <= 0.75);
  }
  for (const auto& step : three.steps) CHECK(step.hermiticity_defect <= 1e-10);

  const Certificate none = certify(kHat, well, mesh, 0);
  CHECK(none.certified);
  CHECK(none.certified_count == 0);
  CHECK(none.steps.front().h.size() == 0);

  CHECK_THROWS_AS(certify(kHat, well, mesh, 40), PreconditionError);
  CHECK_THROWS_AS(certify(kHat, well, build_mesh(1.1, 2, 64), 1), PreconditionError);
}

TEST_CASE("without a potential nothing is certified") {
  const SurfaceMesh mesh = build_mesh(1.0, 2, 64);
  const TubularChart chart = tubular_chart(mesh, 0.25);
  const FormModel model = scalar_form_model(kHat, zero_potential(2));
  const Eigen::MatrixXcd psi = Eigen::MatrixXcd::Ones(64, 1) / std::sqrt(2.0 * M_PI);
  const Certificate cert = certify_trials(model, chart, psi, Eigen::VectorXd::Zero(1), default_schedule(), TransverseProfile());
  CHECK_FALSE(cert.certified);
  CHECK(cert.certified_count == 0);
  for (const auto& step : cert.steps) CHECK(step.h(0, 0).real() > 0.0);
}

TEST_CASE("output formats") {
  const Certificate cert = certify(kHat, gaussian_well(2, 1.0, 1.0), build_mesh(1.0, 2, 32), 2);
  const auto j = to_json(cert);
  CHECK(j["certified"] == true);
  CHECK(j["convergence"].size() == 4);
  CHECK(j["convergence"][0]["ratio"].is_null());
  const std::string csv = to_csv(cert);
  CHECK(csv.rfind("epsilon,j,k,re_h,im_h\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 4);
}

TEST_CASE("the form is the quadratic form of H on a fine momentum lattice") {
  // f(L(s, t)) = phi(t / eps) Psi(s) / eps placed on the dual lattice of a
  // periodic box; the grid Rayleigh quotient must match the quadrature form
  // with the unitary potential scale (m = 0 here).
  const double edge = 80.0;
  const int g = 128;
  const Potential well = gaussian_well(2, 1.0, 1.0);
  const GridHamiltonian h(kHat, well, OracleOptions{edge, g, 3.0});
  const SurfaceMesh mesh = build_mesh(1.0, 2, 128);
  const TubularChart chart = tubular_chart(mesh, 0.5);
  const TransverseProfile profile;
  FormModel model = scalar_form_model(kHat, well, unitary_potential_scale(2));
  const double eps = chart.half_width();

  for (int m : {0, 2}) {
    const Eigen::VectorXcd psi = angular_mode(mesh, m);
    Eigen::MatrixXcd trial(psi.size(), 1);
    trial.col(0) = psi;
    const double continuum =
        form_matrix(model, chart, trial, profile, 1.0)(0, 0).real();
    double norm = 0.0;
    for (std::size_t a = 0; a < profile.rule().size(); ++a) {
      norm += profile.rule().weights[a] * std::pow(profile.values()[a], 2) * chart.jacobian(eps * profile.rule().nodes[a]) / eps;
    }
    norm *= psi.squaredNorm() * mesh.weights[0];

    // Lattice coefficients, then a separable inverse DFT to real space.
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(g, g);
    for (std::size_t idx = 0; idx < h.size(); ++idx) {
      const Point p = h.momentum(idx);
      const double t = p.norm() - 1.0;
      if (std::abs(t) >= eps) continue;
      const double angle = std::atan2(p[1], p[0]);
      coeff(static_cast<Eigen::Index>(idx / g), static_cast<Eigen::Index>(idx % g)) =
          profile(t / eps) / eps * std::cos(m * angle) / std::sqrt(M_PI);
    }
    Eigen::MatrixXcd phase(g, g);
    for (int j = 0; j < g; ++j) {
      for (int k = 0; k < g; ++k) {
        const int freq = k < g / 2 ? k : k - g;
        phase(j, k) = std::exp(std::complex<double>(0.0, 2.0 * M_PI * freq / edge * (-0.5 * edge + edge * j / g)));
      }
    }
    const Eigen::MatrixXcd field = phase * coeff * phase.transpose();
    std::vector<std::complex<double>> in(h.size());
    std::vector<std::complex<double>> out(h.size());
    for (std::size_t idx = 0; idx < h.size(); ++idx) {
      in[idx] = field(static_cast<Eigen::Index>(idx / g), static_cast<Eigen::Index>(idx % g));
    }
    h.apply(std::span<const std::complex<double>>(in), std::span<std::complex<double>>(out));
    std::complex<double> num = 0.0;
    double den = 0.0;
    for (std::size_t idx = 0; idx < h.size(); ++idx) {
      num += std::conj(in[idx]) * out[idx];
      den += std::norm(in[idx]);
    }
    const double lattice = num.real() / den;
    MESSAGE("m = " << m << ": quadrature quotient " << continuum / norm << ", lattice quotient " << lattice);
    // Momentum spacing 2 pi / 80 samples the bump with about 13 points across;
    // the quotients then agree to a few 1e-5.
    CHECK(std::abs(lattice - continuum / norm) < 1e-4);
    CHECK((lattice < 0.0) == (continuum < 0.0));
  }
}
