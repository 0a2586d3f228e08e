#include "degen/experiment.hpp"

#include "degen/direct_oracle.hpp"
#include "degen/errors.hpp"
#include "degen/potentials.hpp"
#include "degen/rayleigh_ritz.hpp"
#include "degen/spin_orbit.hpp"
#include "degen/surface.hpp"
#include "degen/surface_operator.hpp"
#include "degen/symbols.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#ifndef DEGEN_VERSION
#define DEGEN_VERSION "0.0.0"
#endif

namespace degen {

namespace {

using nlohmann::json;

std::string key_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (allowed.count(item.key()) == 0) throw ConfigError(key_path(path, item.key()) + ": unknown key");
  }
}

double get_number(const json& j, const std::string& path, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(key_path(path, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key_path(path, key) + ": must be finite");
  return x;
}

int get_int(const json& j, const std::string& path, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(key_path(path, key) + ": expected an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       const std::optional<std::string>& fallback) {
  if (!j.contains(key)) {
    if (!fallback) throw ConfigError(key_path(path, key) + ": required key is missing");
    return *fallback;
  }
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(key_path(path, key) + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& path, const std::string& key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(key_path(path, key) + ": expected an array of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(key_path(path, key) + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::map<std::string, double> get_params(const json& j, const std::string& path) {
  std::map<std::string, double> out;
  if (!j.contains("params")) return out;
  const std::string where = key_path(path, "params");
  expect_object(j.at("params"), where);
  for (const auto& item : j.at("params").items()) {
    if (!item.value().is_number()) throw ConfigError(key_path(where, item.key()) + ": expected a number");
    out[item.key()] = item.value().get<double>();
  }
  return out;
}

void require_params(const std::map<std::string, double>& params, const std::string& path,
                    const std::set<std::string>& expected) {
  for (const auto& [key, value] : params) {
    if (expected.count(key) == 0) throw ConfigError(key_path(path, key) + ": unknown parameter");
  }
  for (const auto& key : expected) {
    if (params.count(key) == 0) throw ConfigError(key_path(path, key) + ": required parameter is missing");
  }
}

SymbolConfig parse_symbol(const json& j) {
  const std::string path = "symbol";
  expect_object(j, path);
  reject_unknown(j, path, {"kind", "dimension", "params", "radii", "values"});
  SymbolConfig s;
  s.kind = get_string(j, path, "kind", std::nullopt);
  s.dimension = get_int(j, path, "dimension", 2);
  if (s.dimension != 2 && s.dimension != 3) throw ConfigError("symbol.dimension: must be 2 or 3");
  s.params = get_params(j, path);
  s.radii = get_numbers(j, path, "radii");
  s.values = get_numbers(j, path, "values");
  const std::string where = key_path(path, "params");
  const SymbolKind kind = symbol_kind_from_string(s.kind);
  switch (kind) {
    case SymbolKind::Roton:
      require_params(s.params, where, {"delta", "mu", "p0"});
      break;
    case SymbolKind::Bcs:
      require_params(s.params, where, {"mu", "beta"});
      break;
    case SymbolKind::MexicanHat:
      require_params(s.params, where, {"p0"});
      break;
    case SymbolKind::CustomRadial:
      require_params(s.params, where, {});
      if (s.radii.empty() || s.radii.size() != s.values.size()) {
        throw ConfigError("symbol.radii: custom-radial needs radii and values of equal, nonzero length");
      }
      break;
  }
  if (kind != SymbolKind::CustomRadial && (!s.radii.empty() || !s.values.empty())) {
    throw ConfigError("symbol.radii: only custom-radial symbols take tabulated radii and values");
  }
  return s;
}

PotentialConfig parse_potential(const json& j) {
  const std::string path = "potential";
  expect_object(j, path);
  reject_unknown(j, path, {"kind", "params", "file", "oversample"});
  PotentialConfig p;
  p.kind = get_string(j, path, "kind", std::nullopt);
  p.params = get_params(j, path);
  p.file = get_string(j, path, "file", std::string());
  p.oversample = get_int(j, path, "oversample", 0);
  const std::string where = key_path(path, "params");
  if (p.kind == "zero") {
    require_params(p.params, where, {});
  } else if (p.kind == "gaussian-well") {
    require_params(p.params, where, {"depth", "width"});
  } else if (p.kind == "ball-well") {
    require_params(p.params, where, {"depth", "radius"});
  } else if (p.kind == "gaussian-dimple-mix") {
    require_params(p.params, where, {"well_depth", "well_width", "dimple_height", "dimple_width"});
  } else if (p.kind == "tabulated") {
    require_params(p.params, where, {});
    if (p.file.empty()) throw ConfigError("potential.file: required for tabulated potentials");
  } else {
    throw ConfigError("potential.kind: unknown kind '" + p.kind + "'");
  }
  if (p.kind != "tabulated" && (!p.file.empty() || p.oversample != 0)) {
    throw ConfigError("potential.file: only tabulated potentials read a grid file");
  }
  if (p.oversample < 0) throw ConfigError("potential.oversample: must be nonnegative");
  return p;
}

SurfaceConfig parse_surface(const json& j) {
  const std::string path = "surface";
  expect_object(j, path);
  reject_unknown(j, path, {"resolution", "half_width_fraction", "sweep", "threshold"});
  SurfaceConfig s;
  s.resolution = get_int(j, path, "resolution", s.resolution);
  s.half_width_fraction = get_number(j, path, "half_width_fraction", s.half_width_fraction);
  for (double r : get_numbers(j, path, "sweep")) {
    if (r != std::floor(r)) throw ConfigError("surface.sweep: resolutions must be integers");
    s.sweep.push_back(static_cast<int>(r));
  }
  if (j.contains("threshold")) s.threshold = get_number(j, path, "threshold", 0.0);
  if (s.resolution < 4) throw ConfigError("surface.resolution: must be at least 4");
  if (!(s.half_width_fraction > 0.0 && s.half_width_fraction <= 0.5)) {
    throw ConfigError("surface.half_width_fraction: must lie in (0, 0.5]");
  }
  return s;
}

OracleConfig parse_oracle(const json& j) {
  const std::string path = "oracle";
  expect_object(j, path);
  reject_unknown(j, path, {"box_edge", "grid", "k_max", "delta_levels"});
  OracleConfig o;
  o.box_edge = get_number(j, path, "box_edge", o.box_edge);
  o.grid = get_int(j, path, "grid", o.grid);
  o.k_max = get_int(j, path, "k_max", o.k_max);
  o.delta_levels = get_number(j, path, "delta_levels", o.delta_levels);
  if (!(o.box_edge > 0.0)) throw ConfigError("oracle.box_edge: must be positive");
  if (o.grid < 4 || o.grid % 2 != 0) throw ConfigError("oracle.grid: must be an even integer >= 4");
  if (o.k_max < 1 || o.k_max > 64) throw ConfigError("oracle.k_max: must lie in [1, 64]");
  if (!(o.delta_levels > 0.0)) throw ConfigError("oracle.delta_levels: must be positive");
  return o;
}

RayleighRitzConfig parse_rayleigh_ritz(const json& j) {
  const std::string path = "rayleigh_ritz";
  expect_object(j, path);
  reject_unknown(j, path, {"count", "schedule", "transverse_order", "form"});
  RayleighRitzConfig r;
  r.count = get_int(j, path, "count", r.count);
  if (j.contains("schedule")) r.schedule = get_numbers(j, path, "schedule");
  r.transverse_order = get_int(j, path, "transverse_order", r.transverse_order);
  r.form = get_string(j, path, "form", r.form);
  if (r.count < 0) throw ConfigError("rayleigh_ritz.count: must be nonnegative");
  if (r.schedule.empty()) throw ConfigError("rayleigh_ritz.schedule: must not be empty");
  for (double f : r.schedule) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("rayleigh_ritz.schedule: fractions must lie in (0, 1]");
  }
  if (r.transverse_order < 2) throw ConfigError("rayleigh_ritz.transverse_order: must be at least 2");
  if (r.form != "limit" && r.form != "unitary") {
    throw ConfigError("rayleigh_ritz.form: expected 'limit' or 'unitary'");
  }
  return r;
}

PointTestConfig parse_point_test(const json& j) {
  const std::string path = "point_test";
  expect_object(j, path);
  reject_unknown(j, path, {"count", "tolerance", "points"});
  PointTestConfig p;
  p.count = get_int(j, path, "count", p.count);
  p.tolerance = get_number(j, path, "tolerance", p.tolerance);
  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array()) throw ConfigError("point_test.points: expected an array of coordinate arrays");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string where = "point_test.points[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || pts[i].size() < 2 || pts[i].size() > 3) {
        throw ConfigError(where + ": expected 2 or 3 coordinates");
      }
      Point x = Point::Zero();
      for (std::size_t d = 0; d < pts[i].size(); ++d) {
        if (!pts[i][d].is_number()) throw ConfigError(where + ": expected numbers");
        x[static_cast<Eigen::Index>(d)] = pts[i][d].get<double>();
      }
      p.points.push_back(x);
    }
    p.count = static_cast<int>(p.points.size());
  }
  if (p.count < 1) throw ConfigError("point_test.count: must be positive");
  if (!(p.tolerance >= 0.0)) throw ConfigError("point_test.tolerance: must be nonnegative");
  return p;
}

SpinOrbitConfig parse_spin_orbit(const json& j) {
  const std::string path = "spin_orbit";
  expect_object(j, path);
  reject_unknown(j, path, {"kind", "alpha", "resolution", "count"});
  SpinOrbitConfig s;
  s.kind = get_string(j, path, "kind", s.kind);
  s.alpha = get_number(j, path, "alpha", s.alpha);
  s.resolution = get_int(j, path, "resolution", s.resolution);
  s.count = get_int(j, path, "count", s.count);
  spin_orbit_kind_from_string(s.kind);
  if (s.alpha == 0.0) throw ConfigError("spin_orbit.alpha: must be nonzero");
  if (s.resolution < 4) throw ConfigError("spin_orbit.resolution: must be at least 4");
  if (s.count < 0) throw ConfigError("spin_orbit.count: must be nonnegative");
  return s;
}

json symbol_echo(const SymbolConfig& s) {
  json j = {{"kind", s.kind}, {"dimension", s.dimension}, {"params", s.params}};
  if (!s.radii.empty()) {
    j["radii"] = s.radii;
    j["values"] = s.values;
  }
  return j;
}

json potential_echo(const PotentialConfig& p) {
  json j = {{"kind", p.kind}, {"params", p.params}};
  if (!p.file.empty()) {
    j["file"] = p.file;
    j["oversample"] = p.oversample;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Model construction

DispersionSymbol make_symbol(const SymbolConfig& s) {
  const auto& p = s.params;
  switch (symbol_kind_from_string(s.kind)) {
    case SymbolKind::Roton:
      return DispersionSymbol::roton(s.dimension, p.at("delta"), p.at("mu"), p.at("p0"));
    case SymbolKind::Bcs:
      return DispersionSymbol::bcs(s.dimension, p.at("mu"), p.at("beta"));
    case SymbolKind::MexicanHat:
      return DispersionSymbol::mexican_hat(s.dimension, p.at("p0"));
    case SymbolKind::CustomRadial:
      return DispersionSymbol::custom_radial(s.dimension, s.radii, s.values);
  }
  throw ConfigError("symbol.kind: unsupported");
}

// `band_radius` is the largest |k| at which a tabulated transform will be queried.
Potential make_potential(const ExperimentConfig& config, int dimension, double band_radius) {
  const PotentialConfig& c = *config.potential;
  const auto& p = c.params;
  if (c.kind == "zero") return zero_potential(dimension);
  if (c.kind == "gaussian-well") return gaussian_well(dimension, p.at("depth"), p.at("width"));
  if (c.kind == "ball-well") return ball_well(dimension, p.at("depth"), p.at("radius"));
  if (c.kind == "gaussian-dimple-mix") {
    return gaussian_dimple_mix(dimension, p.at("well_depth"), p.at("well_width"), p.at("dimple_height"),
                               p.at("dimple_width"));
  }
  std::filesystem::path file(c.file);
  if (file.is_relative()) file = config.base_directory / file;
  PotentialGrid grid = read_potential_grid(file);
  if (grid.dimension != dimension) {
    throw ConfigError("potential.file: grid dimension " + std::to_string(grid.dimension) +
                      " does not match the symbol dimension " + std::to_string(dimension));
  }
  return tabulated_potential(std::move(grid), TabulatedOptions{band_radius, c.oversample});
}

void require_blocks(const ExperimentConfig& config, bool symbol, bool potential) {
  if (symbol && !config.symbol) throw ConfigError("symbol: required by task " + to_string(config.task));
  if (potential && !config.potential) throw ConfigError("potential: required by task " + to_string(config.task));
}

struct Setup {
  DispersionSymbol symbol;
  SymbolMinimum minimum;
  Potential potential;
};

Setup scalar_setup(const ExperimentConfig& config) {
  require_blocks(config, true, true);
  DispersionSymbol symbol = make_symbol(*config.symbol);
  const SymbolMinimum minimum = find_minimum(symbol);
  const double reach = 2.0 * minimum.radius * (1.0 + config.surface.half_width_fraction);
  Potential potential = make_potential(config, symbol.dimension(), reach);
  return {symbol, minimum, potential};
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

json provenance(const ExperimentConfig& config) {
  const json echo = config.echo();
  return {{"schema_version", kSchemaVersion},
          {"toolkit", "degen"},
          {"toolkit_version", DEGEN_VERSION},
          {"task", to_string(config.task)},
          {"config", echo},
          {"config_hash", config_hash(echo)}};
}

json symbol_summary(const Setup& setup) {
  return {{"kind", to_string(setup.symbol.kind())},
          {"dimension", setup.symbol.dimension()},
          {"bottom", setup.minimum.value},
          {"surface_radius", setup.minimum.radius}};
}

// ---------------------------------------------------------------------------
// Tasks

RunOutcome run_surface_spectrum(const ExperimentConfig& config) {
  const Setup setup = scalar_setup(config);
  const SurfaceMesh mesh = build_mesh(setup.minimum.radius, setup.symbol.dimension(), config.surface.resolution);
  const SurfaceOperatorMatrix op = assemble(mesh, setup.potential);
  const double threshold = config.surface.threshold.value_or(default_negative_threshold(op));
  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = symbol_summary(setup);
  out.document["result"] = to_json(op, threshold, setup.potential);
  out.document["result"]["norm"] = op.norm();
  out.document["result"]["hermiticity_defect"] = op.hermiticity_defect;
  std::ostringstream csv;
  csv << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < op.eigenvalues.size(); ++i) csv << i << ',' << format_double(op.eigenvalues[i]) << '\n';
  out.csv = csv.str();
  return out;
}

RunOutcome run_bound_count(const ExperimentConfig& config) {
  const Setup setup = scalar_setup(config);
  std::vector<int> resolutions{config.surface.resolution};
  for (int r : config.surface.sweep) {
    if (r < 4) throw ConfigError("surface.sweep: resolutions must be at least 4");
    resolutions.push_back(r);
  }
  json rows = json::array();
  std::ostringstream csv;
  csv << "resolution,mesh_size,negative_count,lowest_eigenvalue,threshold\n";
  int lower_bound = 0;
  for (int resolution : resolutions) {
    const SurfaceMesh mesh = build_mesh(setup.minimum.radius, setup.symbol.dimension(), resolution);
    const SurfaceOperatorMatrix op = assemble(mesh, setup.potential);
    const double threshold = config.surface.threshold.value_or(default_negative_threshold(op));
    const int count = count_negative(op, threshold);
    lower_bound = std::max(lower_bound, count);
    const double lowest = op.eigenvalues.size() > 0 ? op.eigenvalues[0] : 0.0;
    rows.push_back({{"resolution", resolution},
                    {"mesh_size", mesh.size()},
                    {"negative_count", count},
                    {"lowest_eigenvalue", lowest},
                    {"threshold", threshold}});
    csv << resolution << ',' << mesh.size() << ',' << count << ',' << format_double(lowest) << ','
        << format_double(threshold) << '\n';
  }
  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = symbol_summary(setup);
  out.document["potential"] = setup.potential.describe();
  out.document["result"] = {{"sweep", rows}, {"bound_state_lower_bound", lower_bound}};
  out.csv = csv.str();
  return out;
}

CertifyOptions certify_options(const ExperimentConfig& config, int dimension) {
  CertifyOptions options;
  options.schedule = config.rayleigh_ritz.schedule;
  options.half_width_fraction = config.surface.half_width_fraction;
  options.transverse_order = config.rayleigh_ritz.transverse_order;
  options.potential_scale = config.rayleigh_ritz.form == "unitary" ? unitary_potential_scale(dimension) : 1.0;
  return options;
}

RunOutcome run_rayleigh_ritz(const ExperimentConfig& config) {
  const Setup setup = scalar_setup(config);
  const SurfaceMesh mesh = build_mesh(setup.minimum.radius, setup.symbol.dimension(), config.surface.resolution);
  const Certificate cert = certify(setup.symbol, setup.potential, mesh, config.rayleigh_ritz.count,
                                   certify_options(config, setup.symbol.dimension()));
  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = symbol_summary(setup);
  out.document["potential"] = setup.potential.describe();
  out.document["result"] = to_json(cert);
  out.document["result"]["status"] = cert.certified ? "certified" : "certification-failed";
  out.csv = to_csv(cert);
  out.exit_code = cert.certified ? kExitOk : kExitCertificationFailed;
  return out;
}

std::vector<Point> random_surface_points(int count, int dimension, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Point> points;
  while (static_cast<int>(points.size()) < count) {
    Point x = Point::Zero();
    for (int d = 0; d < dimension; ++d) x[d] = gauss(rng);
    if (x.norm() == 0.0) continue;
    points.push_back(radius * x / x.norm());
  }
  return points;
}

RunOutcome run_point_test(const ExperimentConfig& config) {
  const Setup setup = scalar_setup(config);
  const PointTestConfig& pc = config.point_test;
  std::vector<Point> points = pc.points;
  if (points.empty()) {
    points = random_surface_points(pc.count, setup.symbol.dimension(), setup.minimum.radius, config.seed);
  }
  const PointMatrixResult res = point_matrix_test(setup.potential, points, pc.tolerance, setup.minimum.radius);
  json pts = json::array();
  for (const Point& p : points) {
    std::vector<double> coords(p.data(), p.data() + setup.symbol.dimension());
    pts.push_back(coords);
  }
  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = symbol_summary(setup);
  out.document["potential"] = setup.potential.describe();
  out.document["result"] = {{"points", pts},
                            {"eigenvalues", vector_json(res.eigenvalues)},
                            {"tolerance", pc.tolerance},
                            {"is_negative_definite", res.negative_definite}};
  return out;
}

struct OracleRun {
  json result;
  int count = 0;
};

OracleRun oracle_run(const ExperimentConfig& config, const Setup& setup) {
  const OracleConfig& oc = config.oracle;
  const GridHamiltonian hamiltonian(setup.symbol, setup.potential,
                                    OracleOptions{oc.box_edge, oc.grid, oc.delta_levels});
  LanczosOptions options;
  options.seed = config.seed;
  const BoundStateCount count = count_below(hamiltonian, std::nullopt, oc.k_max, options);
  return {to_json(hamiltonian, count), count.count};
}

RunOutcome run_oracle(const ExperimentConfig& config) {
  const Setup setup = scalar_setup(config);
  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = symbol_summary(setup);
  out.document["potential"] = setup.potential.describe();
  out.document["result"] = oracle_run(config, setup).result;
  return out;
}

RunOutcome run_spin_orbit(const ExperimentConfig& config) {
  if (!config.spin_orbit) throw ConfigError("spin_orbit: required by task spin-orbit");
  if (!config.potential) throw ConfigError("potential: required by task spin-orbit");
  const SpinOrbitConfig& sc = *config.spin_orbit;
  const MatrixSymbol symbol = spin_orbit_kind_from_string(sc.kind) == SpinOrbitKind::Rashba
                                  ? MatrixSymbol::rashba(sc.alpha)
                                  : MatrixSymbol::dresselhaus(sc.alpha);
  const double reach = 2.0 * symbol.surface_radius() * (1.0 + config.surface.half_width_fraction);
  const Potential potential = make_potential(config, 2, reach);
  const SurfaceMesh mesh = build_mesh(symbol.surface_radius(), 2, sc.resolution);
  const SurfaceOperatorMatrix op = assemble_spin_kernel(symbol, mesh, potential);
  const double threshold = default_negative_threshold(op);
  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = {{"kind", sc.kind},
                            {"alpha", sc.alpha},
                            {"bottom", symbol.bottom()},
                            {"surface_radius", symbol.surface_radius()}};
  out.document["result"] = to_json(op, threshold, potential);
  out.document["result"]["norm"] = op.norm();
  if (sc.count > 0) {
    const Certificate cert = certify_spin(symbol, potential, mesh, sc.count, certify_options(config, 2));
    out.document["result"]["certificate"] = to_json(cert);
    out.csv = to_csv(cert);
    if (!cert.certified) out.exit_code = kExitCertificationFailed;
  }
  return out;
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::SurfaceSpectrum:
      return "surface-spectrum";
    case Task::BoundCount:
      return "bound-count";
    case Task::RayleighRitz:
      return "rayleigh-ritz";
    case Task::PointTest:
      return "point-test";
    case Task::Oracle:
      return "oracle";
    case Task::SpinOrbit:
      return "spin-orbit";
  }
  return "unknown";
}

Task task_from_string(const std::string& name) {
  for (Task t : {Task::SurfaceSpectrum, Task::BoundCount, Task::RayleighRitz, Task::PointTest, Task::Oracle,
                 Task::SpinOrbit}) {
    if (to_string(t) == name) return t;
  }
  throw ConfigError("task: unknown task '" + name + "'");
}

ExperimentConfig parse_config(const json& document, const std::filesystem::path& base_directory) {
  expect_object(document, "config");
  reject_unknown(document, "", {"task", "name", "seed", "symbol", "potential", "surface", "oracle",
                                "rayleigh_ritz", "point_test", "spin_orbit"});
  ExperimentConfig config;
  config.base_directory = base_directory;
  config.task = task_from_string(get_string(document, "", "task", std::nullopt));
  config.name = get_string(document, "", "name", to_string(config.task));
  if (document.contains("seed")) {
    const json& seed = document.at("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw ConfigError("seed: expected a nonnegative integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (document.contains("symbol")) config.symbol = parse_symbol(document.at("symbol"));
  if (document.contains("potential")) config.potential = parse_potential(document.at("potential"));
  if (document.contains("surface")) config.surface = parse_surface(document.at("surface"));
  if (document.contains("oracle")) config.oracle = parse_oracle(document.at("oracle"));
  if (document.contains("rayleigh_ritz")) config.rayleigh_ritz = parse_rayleigh_ritz(document.at("rayleigh_ritz"));
  if (document.contains("point_test")) config.point_test = parse_point_test(document.at("point_test"));
  if (document.contains("spin_orbit")) config.spin_orbit = parse_spin_orbit(document.at("spin_orbit"));
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(document, path.parent_path());
}

json ExperimentConfig::echo() const {
  json j = {{"task", to_string(task)}, {"name", name}, {"seed", seed}};
  if (symbol) j["symbol"] = symbol_echo(*symbol);
  if (potential) j["potential"] = potential_echo(*potential);
  json surf = {{"resolution", surface.resolution},
               {"half_width_fraction", surface.half_width_fraction},
               {"sweep", surface.sweep}};
  if (surface.threshold) surf["threshold"] = *surface.threshold;
  j["surface"] = surf;
  j["oracle"] = {{"box_edge", oracle.box_edge},
                 {"grid", oracle.grid},
                 {"k_max", oracle.k_max},
                 {"delta_levels", oracle.delta_levels}};
  j["rayleigh_ritz"] = {{"count", rayleigh_ritz.count},
                        {"schedule", rayleigh_ritz.schedule},
                        {"transverse_order", rayleigh_ritz.transverse_order},
                        {"form", rayleigh_ritz.form}};
  json pt = {{"count", point_test.count}, {"tolerance", point_test.tolerance}};
  if (!point_test.points.empty()) {
    const int dim = symbol ? symbol->dimension : 2;
    json pts = json::array();
    for (const Point& p : point_test.points) pts.push_back(std::vector<double>(p.data(), p.data() + dim));
    pt["points"] = pts;
  }
  j["point_test"] = pt;
  if (spin_orbit) {
    j["spin_orbit"] = {{"kind", spin_orbit->kind},
                       {"alpha", spin_orbit->alpha},
                       {"resolution", spin_orbit->resolution},
                       {"count", spin_orbit->count}};
  }
  return j;
}

std::string config_hash(const json& echo) {
  const std::string text = echo.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

RunOutcome run(const ExperimentConfig& config) {
  switch (config.task) {
    case Task::SurfaceSpectrum:
      return run_surface_spectrum(config);
    case Task::BoundCount:
      return run_bound_count(config);
    case Task::RayleighRitz:
      return run_rayleigh_ritz(config);
    case Task::PointTest:
      return run_point_test(config);
    case Task::Oracle:
      return run_oracle(config);
    case Task::SpinOrbit:
      return run_spin_orbit(config);
  }
  throw ConfigError("task: unsupported");
}

RunOutcome compare(const ExperimentConfig& config) {
  const Setup setup = scalar_setup(config);
  const SurfaceMesh mesh = build_mesh(setup.minimum.radius, setup.symbol.dimension(), config.surface.resolution);
  const SurfaceOperatorMatrix op = assemble(mesh, setup.potential);
  const int requested = std::min(config.rayleigh_ritz.count, count_negative(op));
  const Certificate cert = certify_operator(
      scalar_form_model(setup.symbol, setup.potential,
                        certify_options(config, setup.symbol.dimension()).potential_scale),
      op, requested, certify_options(config, setup.symbol.dimension()));
  const OracleRun oracle = oracle_run(config, setup);
  const bool holds = oracle.count >= cert.certified_count;

  RunOutcome out;
  out.document = provenance(config);
  out.document["symbol"] = symbol_summary(setup);
  out.document["potential"] = setup.potential.describe();
  out.document["result"] = {{"certified_count", cert.certified_count},
                            {"requested_count", requested},
                            {"oracle_count", oracle.count},
                            {"oracle_count_ge_certified", holds},
                            {"certificate", to_json(cert)},
                            {"oracle", oracle.result}};
  out.csv = to_csv(cert);
  out.exit_code = holds ? kExitOk : kExitCompareViolation;
  return out;
}

std::filesystem::path write_outcome(const RunOutcome& outcome, const std::filesystem::path& directory,
                                    const std::string& stem) {
  std::filesystem::create_directories(directory);
  const std::filesystem::path json_path = directory / (stem + ".json");
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw Error("cannot write " + json_path.string());
    out << outcome.document.dump(2) << '\n';
  }
  if (outcome.csv) {
    const std::filesystem::path csv_path = directory / (stem + ".csv");
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw Error("cannot write " + csv_path.string());
    out << *outcome.csv;
  }
  return json_path;
}

}  // namespace degen
