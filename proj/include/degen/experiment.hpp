#pragma once

#include "degen/geometry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace degen {

inline constexpr int kSchemaVersion = 1;

enum class Task { SurfaceSpectrum, BoundCount, RayleighRitz, PointTest, Oracle, SpinOrbit };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

struct SymbolConfig {
  std::string kind;
  int dimension = 2;
  std::map<std::string, double> params;
  std::vector<double> radii;   // custom-radial only
  std::vector<double> values;  // custom-radial only
};

struct PotentialConfig {
  std::string kind;
  std::map<std::string, double> params;
  std::string file;  // tabulated only; relative paths resolve against the config's directory
  int oversample = 0;
};

struct SurfaceConfig {
  int resolution = 64;
  double half_width_fraction = 0.25;
  /// Extra resolutions for the bound-count sweep.
  std::vector<int> sweep;
  std::optional<double> threshold;
};

struct OracleConfig {
  double box_edge = 40.0;
  int grid = 256;
  int k_max = 32;
  double delta_levels = 3.0;
};

struct RayleighRitzConfig {
  int count = 3;
  std::vector<double> schedule{0.2, 0.1, 0.05, 0.025};
  int transverse_order = 12;
  /// "limit" (h -> diag(E)) or "unitary" ((2 pi)^(-n/2) on the potential part).
  std::string form = "limit";
};

struct PointTestConfig {
  int count = 1;
  double tolerance = 1e-12;
  /// Explicit points on the minimum surface; drawn at random when empty.
  std::vector<Point> points;
};

struct SpinOrbitConfig {
  std::string kind = "rashba";
  double alpha = 1.0;
  int resolution = 64;
  /// Eigenvalues to certify by Rayleigh–Ritz; 0 skips certification.
  int count = 0;
};

struct ExperimentConfig {
  Task task = Task::SurfaceSpectrum;
  std::string name;
  std::uint64_t seed = 1;
  std::optional<SymbolConfig> symbol;
  std::optional<PotentialConfig> potential;
  SurfaceConfig surface;
  OracleConfig oracle;
  RayleighRitzConfig rayleigh_ritz;
  PointTestConfig point_test;
  std::optional<SpinOrbitConfig> spin_orbit;
  std::filesystem::path base_directory;

  /// Every setting with defaults filled in; parses back to the same config.
  [[nodiscard]] nlohmann::json echo() const;
};

/// Validates keys and types; ConfigError messages name the offending key.
ExperimentConfig parse_config(const nlohmann::json& document,
                              const std::filesystem::path& base_directory = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the compact echo, as 16 hex digits.
std::string config_hash(const nlohmann::json& echo);

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitCertificationFailed = 2, kExitCompareViolation = 3 };

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json document;
  std::optional<std::string> csv;
};

RunOutcome run(const ExperimentConfig& config);
/// Rayleigh–Ritz certified count against the oracle count.
RunOutcome compare(const ExperimentConfig& config);

/// Writes <dir>/<stem>.json (and .csv when present); returns the JSON path.
std::filesystem::path write_outcome(const RunOutcome& outcome, const std::filesystem::path& directory,
                                    const std::string& stem);

}  // namespace degen
