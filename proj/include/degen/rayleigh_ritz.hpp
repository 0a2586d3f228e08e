#pragma once

#include "degen/potentials.hpp"
#include "degen/quadrature.hpp"
#include "degen/surface.hpp"
#include "degen/surface_operator.hpp"
#include "degen/symbols.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace degen {

/// Bump phi(u) = c exp(-1 / (1 - u^2)) on (-1, 1) with its Gauss–Legendre
/// rule. c is fixed so that the stored rule integrates phi to exactly 1.
class TransverseProfile {
 public:
  explicit TransverseProfile(int order = 12);

  [[nodiscard]] double operator()(double u) const;
  [[nodiscard]] const QuadratureRule& rule() const { return rule_; }
  /// phi at the rule's nodes.
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double normalization() const { return normalization_; }
  [[nodiscard]] int order() const { return static_cast<int>(rule_.size()); }

 private:
  QuadratureRule rule_;
  std::vector<double> values_;
  double normalization_;
};

/// The ingredients of the form <f, (H - m) g> in momentum space.
struct FormModel {
  int dimension = 2;
  /// H0(p) - m for the scalar (or lowest-band) symbol.
  std::function<double(const Point&)> excess;
  /// V^(p - q), times the band overlap <u(p), u(q)> for matrix symbols.
  std::function<std::complex<double>(const Point&, const Point&)> pair_kernel;
  /// Factor applied to the potential part. 1 uses the form in which the
  /// limit of h is diag(E); (2 pi)^(-n/2) gives <f, V g> for the unitary
  /// transform convention.
  double potential_scale = 1.0;
};

FormModel scalar_form_model(const DispersionSymbol& symbol, const Potential& potential,
                            double potential_scale = 1.0);

/// (2 pi)^(-n/2)
double unitary_potential_scale(int dimension);

/// (1/eps^2) int int (H0(L(s,t)) - m) phi(t/eps)^2 conj(Psi_j) Psi_k rho ds dt
/// with eps = fraction * half_width. Psi's are sampled on the chart's mesh.
std::complex<double> kinetic_form(const FormModel& model, const TubularChart& chart,
                                  const Eigen::VectorXcd& psi_j, const Eigen::VectorXcd& psi_k,
                                  const TransverseProfile& profile, double fraction);

/// I(eps): the four-fold quadrature of pair_kernel(L(s, eps t), L(s', eps t'))
/// phi(t) phi(t') conj(Psi_j(s)) Psi_k(s') rho rho'. potential_scale is not applied.
std::complex<double> potential_form(const FormModel& model, const TubularChart& chart,
                                    const Eigen::VectorXcd& psi_j, const Eigen::VectorXcd& psi_k,
                                    const TransverseProfile& profile, double fraction);

/// h(eps)_jk = kinetic + potential_scale * I(eps) for all pairs of columns of
/// `psi`, using one tube point cloud for the whole matrix.
Eigen::MatrixXcd form_matrix(const FormModel& model, const TubularChart& chart, const Eigen::MatrixXcd& psi,
                             const TransverseProfile& profile, double fraction);

struct CertificateStep {
  double fraction = 0.0;  // eps / half_width
  double epsilon = 0.0;   // absolute transverse scale
  Eigen::MatrixXcd h;
  Eigen::VectorXd eigenvalues;  // of h, ascending
  int negative_count = 0;
  bool negative_definite = false;
  double deviation = 0.0;  // max |h - target| entrywise
  double hermiticity_defect = 0.0;
};

struct Certificate {
  int requested = 0;
  /// Largest number of negative eigenvalues of h over the schedule; each is an
  /// eigenvalue of H below m by the min-max principle.
  int certified_count = 0;
  bool certified = false;  // h negative definite for some scheduled eps
  std::optional<double> largest_fraction;
  /// Negative definiteness persists at every scheduled fraction below the largest.
  bool monotone = true;
  double half_width = 0.0;
  Eigen::VectorXd target;  // diag of the eps -> 0 limit
  std::vector<CertificateStep> steps;
};

const std::vector<double>& default_schedule();

struct CertifyOptions {
  std::vector<double> schedule = default_schedule();
  double half_width_fraction = kDefaultHalfWidthFraction;
  int transverse_order = 12;
  double potential_scale = 1.0;
};

/// Evaluates h(eps) along the schedule for given trial profiles Psi (columns,
/// sampled on the mesh) and compares against diag(target).
Certificate certify_trials(const FormModel& model, const TubularChart& chart, const Eigen::MatrixXcd& psi,
                           const Eigen::VectorXd& target, const std::vector<double>& schedule,
                           const TransverseProfile& profile);

/// Certificate from the `count` most negative eigenpairs of an assembled
/// surface operator.
Certificate certify_operator(const FormModel& model, const SurfaceOperatorMatrix& op, int count,
                             const CertifyOptions& options = {});

/// Assembles the surface operator of `potential` on `mesh` (which must lie on
/// the minimum surface of `symbol`) and certifies `count` eigenvalues below m.
Certificate certify(const DispersionSymbol& symbol, const Potential& potential, const SurfaceMesh& mesh,
                    int count, const CertifyOptions& options = {});

nlohmann::json to_json(const Certificate& certificate);
/// Rows eps, j, k, Re h, Im h.
std::string to_csv(const Certificate& certificate);

}  // namespace degen
