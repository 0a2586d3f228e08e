#include "degen/rayleigh_ritz.hpp"

#include "degen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace degen {

namespace {

double bump_shape(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double checked_epsilon(const TubularChart& chart, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw PreconditionError("transverse scale must be a fraction in (0, 1] of the chart half-width");
  }
  return fraction * chart.half_width();
}

void check_trial(const TubularChart& chart, const Eigen::VectorXcd& psi) {
  if (static_cast<std::size_t>(psi.size()) != chart.mesh().size()) {
    throw PreconditionError("trial profile length does not match the mesh");
  }
}

// Tube point cloud {L(s_i, eps u_a)} with quadrature weights w_i q_a phi_a rho_a,
// ordered node-major within each transverse layer.
struct TubeCloud {
  std::vector<Point> points;
  Eigen::VectorXd weights;
  Eigen::Index nodes = 0;
  Eigen::Index layers = 0;
};

TubeCloud tube_cloud(const TubularChart& chart, const TransverseProfile& profile, double epsilon) {
  const SurfaceMesh& mesh = chart.mesh();
  TubeCloud cloud;
  cloud.nodes = static_cast<Eigen::Index>(mesh.size());
  cloud.layers = profile.order();
  cloud.points.reserve(static_cast<std::size_t>(cloud.nodes * cloud.layers));
  cloud.weights.resize(cloud.nodes * cloud.layers);
  Eigen::Index idx = 0;
  for (Eigen::Index a = 0; a < cloud.layers; ++a) {
    const double t = epsilon * profile.rule().nodes[static_cast<std::size_t>(a)];
    const double layer = profile.rule().weights[static_cast<std::size_t>(a)] *
                         profile.values()[static_cast<std::size_t>(a)] * chart.jacobian(t);
    for (Eigen::Index i = 0; i < cloud.nodes; ++i, ++idx) {
      cloud.points.push_back(chart.map(static_cast<std::size_t>(i), t));
      cloud.weights[idx] = mesh.weights[static_cast<std::size_t>(i)] * layer;
    }
  }
  return cloud;
}

// Per-node kinetic weight w_i (1/eps) sum_a q_a phi_a^2 (H0 - m)(L(s_i, eps u_a)) rho_a.
Eigen::VectorXd kinetic_weights(const FormModel& model, const TubularChart& chart,
                                const TransverseProfile& profile, double epsilon) {
  const SurfaceMesh& mesh = chart.mesh();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t a = 0; a < profile.rule().size(); ++a) {
    const double t = epsilon * profile.rule().nodes[a];
    const double phi = profile.values()[a];
    const double layer = profile.rule().weights[a] * phi * phi * chart.jacobian(t) / epsilon;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      g[static_cast<Eigen::Index>(i)] += layer * model.excess(chart.map(i, t));
    }
  }
  for (std::size_t i = 0; i < mesh.size(); ++i) g[static_cast<Eigen::Index>(i)] *= mesh.weights[i];
  return g;
}

// D K D on the tube cloud, where D holds the cloud weights.
Eigen::MatrixXcd weighted_kernel(const FormModel& model, const TubeCloud& cloud) {
  const auto size = static_cast<Eigen::Index>(cloud.points.size());
  Eigen::MatrixXcd k(size, size);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index p = 0; p < size; ++p) {
    for (Eigen::Index q = 0; q < size; ++q) {
      k(p, q) = cloud.weights[p] * model.pair_kernel(cloud.points[static_cast<std::size_t>(p)],
                                                     cloud.points[static_cast<std::size_t>(q)]) *
                cloud.weights[q];
    }
  }
  return k;
}

// Trial values on the cloud: Psi(s_i) repeated across layers.
Eigen::MatrixXcd lift(const Eigen::MatrixXcd& psi, const TubeCloud& cloud) {
  Eigen::MatrixXcd lifted(cloud.nodes * cloud.layers, psi.cols());
  for (Eigen::Index a = 0; a < cloud.layers; ++a) lifted.middleRows(a * cloud.nodes, cloud.nodes) = psi;
  return lifted;
}

}  // namespace

TransverseProfile::TransverseProfile(int order) : rule_(gauss_legendre(order)) {
  double integral = 0.0;
  for (std::size_t a = 0; a < rule_.size(); ++a) integral += rule_.weights[a] * bump_shape(rule_.nodes[a]);
  normalization_ = 1.0 / integral;
  values_.resize(rule_.size());
  for (std::size_t a = 0; a < rule_.size(); ++a) values_[a] = normalization_ * bump_shape(rule_.nodes[a]);
}

double TransverseProfile::operator()(double u) const { return normalization_ * bump_shape(u); }

FormModel scalar_form_model(const DispersionSymbol& symbol, const Potential& potential, double potential_scale) {
  if (symbol.dimension() != potential.dimension()) {
    throw PreconditionError("symbol and potential dimensions differ");
  }
  const double m = find_minimum(symbol).value;
  FormModel model;
  model.dimension = symbol.dimension();
  model.excess = [symbol, m](const Point& p) { return symbol(p) - m; };
  model.pair_kernel = [potential](const Point& p, const Point& q) { return potential.fourier(p - q); };
  model.potential_scale = potential_scale;
  return model;
}

double unitary_potential_scale(int dimension) { return std::pow(2.0 * M_PI, -0.5 * dimension); }

std::complex<double> kinetic_form(const FormModel& model, const TubularChart& chart,
                                  const Eigen::VectorXcd& psi_j, const Eigen::VectorXcd& psi_k,
                                  const TransverseProfile& profile, double fraction) {
  const double epsilon = checked_epsilon(chart, fraction);
  check_trial(chart, psi_j);
  check_trial(chart, psi_k);
  const Eigen::VectorXd g = kinetic_weights(model, chart, profile, epsilon);
  return (psi_j.conjugate().array() * g.array() * psi_k.array()).sum();
}

std::complex<double> potential_form(const FormModel& model, const TubularChart& chart,
                                    const Eigen::VectorXcd& psi_j, const Eigen::VectorXcd& psi_k,
                                    const TransverseProfile& profile, double fraction) {
  const double epsilon = checked_epsilon(chart, fraction);
  check_trial(chart, psi_j);
  check_trial(chart, psi_k);
  const TubeCloud cloud = tube_cloud(chart, profile, epsilon);
  const Eigen::MatrixXcd k = weighted_kernel(model, cloud);
  const Eigen::VectorXcd fj = lift(psi_j, cloud).col(0);
  const Eigen::VectorXcd fk = lift(psi_k, cloud).col(0);
  return fj.dot(k * fk);
}

Eigen::MatrixXcd form_matrix(const FormModel& model, const TubularChart& chart, const Eigen::MatrixXcd& psi,
                             const TransverseProfile& profile, double fraction) {
  const double epsilon = checked_epsilon(chart, fraction);
  if (static_cast<std::size_t>(psi.rows()) != chart.mesh().size()) {
    throw PreconditionError("trial profile length does not match the mesh");
  }
  const Eigen::VectorXd g = kinetic_weights(model, chart, profile, epsilon);
  Eigen::MatrixXcd h = psi.adjoint() * g.asDiagonal() * psi;
  if (psi.cols() > 0 && model.potential_scale != 0.0) {
    const TubeCloud cloud = tube_cloud(chart, profile, epsilon);
    const Eigen::MatrixXcd f = lift(psi, cloud);
    h += model.potential_scale * (f.adjoint() * (weighted_kernel(model, cloud) * f));
  }
  return h;
}

const std::vector<double>& default_schedule() {
  static const std::vector<double> schedule{0.2, 0.1, 0.05, 0.025};
  return schedule;
}

Certificate certify_trials(const FormModel& model, const TubularChart& chart, const Eigen::MatrixXcd& psi,
                           const Eigen::VectorXd& target, const std::vector<double>& schedule,
                           const TransverseProfile& profile) {
  if (target.size() != psi.cols()) throw PreconditionError("one target value per trial profile is required");
  if (schedule.empty()) throw ConfigError("the transverse schedule is empty");
  Certificate cert;
  cert.requested = static_cast<int>(psi.cols());
  cert.half_width = chart.half_width();
  cert.target = target;

  for (double fraction : schedule) {
    CertificateStep step;
    step.fraction = fraction;
    step.epsilon = checked_epsilon(chart, fraction);
    Eigen::MatrixXcd h = form_matrix(model, chart, psi, profile, fraction);
    const double size = h.size() > 0 ? h.cwiseAbs().maxCoeff() : 0.0;
    step.hermiticity_defect = h.size() > 0 ? (h - h.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (step.hermiticity_defect > 1e-10 * std::max(1.0, size)) {
      std::ostringstream msg;
      msg << "h(eps) at fraction " << fraction << " is not Hermitian: defect " << step.hermiticity_defect;
      throw ConsistencyError(msg.str());
    }
    step.h = 0.5 * (h + h.adjoint());
    if (step.h.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(step.h, Eigen::EigenvaluesOnly);
      step.eigenvalues = solver.eigenvalues();
      const double threshold = 1e-12 * std::max(1.0, step.eigenvalues.cwiseAbs().maxCoeff());
      step.negative_count = count_negative(step.eigenvalues, threshold);
      Eigen::MatrixXcd diff = step.h;
      diff.diagonal() -= target.cast<std::complex<double>>();
      step.deviation = diff.cwiseAbs().maxCoeff();
    }
    step.negative_definite = step.negative_count == cert.requested;
    cert.certified_count = std::max(cert.certified_count, step.negative_count);
    if (step.negative_definite && (!cert.largest_fraction || fraction > *cert.largest_fraction)) {
      cert.largest_fraction = fraction;
    }
    cert.steps.push_back(std::move(step));
  }
  cert.certified = cert.largest_fraction.has_value();
  if (cert.largest_fraction) {
    for (const auto& step : cert.steps) {
      if (step.fraction < *cert.largest_fraction && !step.negative_definite) cert.monotone = false;
    }
  }
  return cert;
}

Certificate certify_operator(const FormModel& model, const SurfaceOperatorMatrix& op, int count,
                             const CertifyOptions& options) {
  if (count < 0) throw PreconditionError("certify: count must be nonnegative");
  const int available = count_negative(op);
  if (count > available) {
    std::ostringstream msg;
    msg << "certify: " << count << " eigenvalues requested but the surface operator has only " << available
        << " negative ones";
    throw PreconditionError(msg.str());
  }
  const TubularChart chart = tubular_chart(op.mesh, options.half_width_fraction);
  const TransverseProfile profile(options.transverse_order);
  const Eigen::MatrixXcd psi = op.eigenfunctions(count);
  const Eigen::VectorXd target = model.potential_scale * op.eigenvalues.head(count);
  return certify_trials(model, chart, psi, target, options.schedule, profile);
}

Certificate certify(const DispersionSymbol& symbol, const Potential& potential, const SurfaceMesh& mesh,
                    int count, const CertifyOptions& options) {
  const SymbolMinimum minimum = find_minimum(symbol);
  if (mesh.dimension != symbol.dimension() ||
      std::abs(mesh.radius - minimum.radius) > 1e-8 * std::max(1.0, minimum.radius)) {
    throw PreconditionError("certify: the mesh does not lie on the minimum surface of the symbol");
  }
  const FormModel model = scalar_form_model(symbol, potential, options.potential_scale);
  return certify_operator(model, assemble(mesh, potential), count, options);
}

nlohmann::json to_json(const Certificate& certificate) {
  nlohmann::json steps = nlohmann::json::array();
  nlohmann::json convergence = nlohmann::json::array();
  const CertificateStep* previous = nullptr;
  for (const auto& step : certificate.steps) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index j = 0; j < step.h.rows(); ++j) {
      std::vector<double> r;
      std::vector<double> i;
      for (Eigen::Index k = 0; k < step.h.cols(); ++k) {
        r.push_back(step.h(j, k).real());
        i.push_back(step.h(j, k).imag());
      }
      re.push_back(r);
      im.push_back(i);
    }
    steps.push_back({{"fraction", step.fraction},
                     {"epsilon", step.epsilon},
                     {"h_re", re},
                     {"h_im", im},
                     {"eigenvalues", std::vector<double>(step.eigenvalues.data(),
                                                         step.eigenvalues.data() + step.eigenvalues.size())},
                     {"negative_count", step.negative_count},
                     {"negative_definite", step.negative_definite},
                     {"hermiticity_defect", step.hermiticity_defect}});
    nlohmann::json row = {{"fraction", step.fraction}, {"deviation", step.deviation}};
    row["ratio"] = previous != nullptr && previous->deviation > 0.0
                       ? nlohmann::json(step.deviation / previous->deviation)
                       : nlohmann::json(nullptr);
    convergence.push_back(row);
    previous = &step;
  }
  return {{"requested", certificate.requested},
          {"certified_count", certificate.certified_count},
          {"certified", certificate.certified},
          {"largest_fraction", certificate.largest_fraction ? nlohmann::json(*certificate.largest_fraction)
                                                            : nlohmann::json(nullptr)},
          {"monotone", certificate.monotone},
          {"half_width", certificate.half_width},
          {"target", std::vector<double>(certificate.target.data(),
                                         certificate.target.data() + certificate.target.size())},
          {"steps", steps},
          {"convergence", convergence}};
}

std::string to_csv(const Certificate& certificate) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "epsilon,j,k,re_h,im_h\n";
  for (const auto& step : certificate.steps) {
    for (Eigen::Index j = 0; j < step.h.rows(); ++j) {
      for (Eigen::Index k = 0; k < step.h.cols(); ++k) {
        out << step.fraction << ',' << j << ',' << k << ',' << step.h(j, k).real() << ','
            << step.h(j, k).imag() << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace degen
