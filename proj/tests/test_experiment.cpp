#include "degen/errors.hpp"
#include "degen/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace degen;
using nlohmann::json;

namespace {

json base(const std::string& task) {
  return {{"task", task},
          {"symbol", {{"kind", "mexican-hat"}, {"dimension", 2}, {"params", {{"p0", 1.0}}}}},
          {"potential", {{"kind", "gaussian-well"}, {"params", {{"depth", 1.0}, {"width", 1.0}}}}}};
}

std::string config_error(const json& document) {
  try {
    parse_config(document);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("config errors name the offending key") {
  json j = base("surface-spectrum");
  j["surface"] = {{"resolutoin", 64}};
  CHECK(config_error(j).find("surface.resolutoin") != std::string::npos);

  j = base("surface-spectrum");
  j["oracle"] = {{"grid", "many"}};
  CHECK(config_error(j).find("oracle.grid") != std::string::npos);

  j = base("surface-spectrum");
  j["potential"]["params"].erase("width");
  CHECK(config_error(j).find("potential.params.width") != std::string::npos);

  j = base("surface-spectrum");
  j["symbol"]["kind"] = "phonon";
  CHECK(config_error(j).find("phonon") != std::string::npos);

  CHECK(config_error(json{{"task", "fly"}}).find("task") != std::string::npos);
  CHECK(config_error(json{{"symbol", {}}}).find("task") != std::string::npos);
  CHECK(config_error(json{{"task", "oracle"}, {"extra", 1}}).find("extra") != std::string::npos);

  j = base("rayleigh-ritz");
  j["rayleigh_ritz"] = {{"schedule", {0.2, 1.5}}};
  CHECK(config_error(j).find("rayleigh_ritz.schedule") != std::string::npos);

  j = base("spin-orbit");
  j["spin_orbit"] = {{"kind", "weyl"}};
  CHECK(config_error(j).find("spin_orbit.kind") != std::string::npos);

  CHECK_THROWS_AS(run(parse_config(json{{"task", "oracle"}})), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("echo round-trips and the hash is stable") {
  json j = base("rayleigh-ritz");
  j["seed"] = 42;
  j["surface"] = {{"resolution", 32}, {"sweep", {64}}};
  j["point_test"] = {{"points", {{1.0, 0.0}, {0.0, 1.0}}}};
  const ExperimentConfig config = parse_config(j);
  const json echo = config.echo();
  CHECK(echo["rayleigh_ritz"]["count"] == 3);
  CHECK(echo["oracle"]["grid"] == 256);
  CHECK(echo["point_test"]["count"] == 2);
  const ExperimentConfig again = parse_config(echo);
  CHECK(again.echo() == echo);
  CHECK(config_hash(echo) == config_hash(again.echo()));
  CHECK(config_hash(echo).size() == 16);
  json other = echo;
  other["seed"] = 43;
  CHECK(config_hash(other) != config_hash(echo));
}

TEST_CASE("surface-spectrum task") {
  const RunOutcome out = run(parse_config(base("surface-spectrum")));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.document["schema_version"] == kSchemaVersion);
  CHECK(out.document["config"] == parse_config(base("surface-spectrum")).echo());
  CHECK(out.document["result"]["eigenvalues"].size() == 64);
  CHECK(out.document["result"]["negative_count"].get<int>() >= 10);
  REQUIRE(out.csv);
  CHECK(out.csv->rfind("index,eigenvalue\n", 0) == 0);
}

TEST_CASE("bound-count sweep") {
  json j = base("bound-count");
  j["surface"] = {{"resolution", 32}, {"sweep", {64, 128}}, {"threshold", 1e-6}};
  const RunOutcome out = run(parse_config(j));
  const json& rows = out.document["result"]["sweep"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[2]["negative_count"].get<int>() >= rows[1]["negative_count"].get<int>());
  CHECK(out.document["result"]["bound_state_lower_bound"] == rows[2]["negative_count"]);
}

TEST_CASE("point-test task") {
  json j = base("point-test");
  j["potential"] = {{"kind", "gaussian-dimple-mix"},
                    {"params", {{"well_depth", 1.0}, {"well_width", 1.5}, {"dimple_height", 1.5}, {"dimple_width", 0.5}}}};
  j["point_test"] = {{"count", 1}};
  const RunOutcome out = run(parse_config(j));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.document["result"]["is_negative_definite"] == true);

  j["point_test"] = {{"points", {{0.3, 0.0}}}};
  CHECK_THROWS_AS(run(parse_config(j)), PreconditionError);
}

TEST_CASE("rayleigh-ritz task certifies, and reports failure with exit status 2") {
  const RunOutcome out = run(parse_config(base("rayleigh-ritz")));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.document["result"]["status"] == "certified");
  CHECK(out.document["result"]["certified_count"] == 3);

  // A very shallow well tested only at the widest tube: kinetic energy wins.
  json j = base("rayleigh-ritz");
  j["rayleigh_ritz"] = {{"count", 1}, {"schedule", {1.0}}};
  j["surface"] = {{"half_width_fraction", 0.5}};
  j["potential"]["params"]["depth"] = 0.01;
  const RunOutcome weak = run(parse_config(j));
  CHECK(weak.exit_code == kExitCertificationFailed);
  CHECK(weak.document["result"]["status"] == "certification-failed");
}

TEST_CASE("oracle and compare without a potential") {
  json j = base("oracle");
  j["potential"] = {{"kind", "zero"}};
  j["oracle"] = {{"box_edge", 20.0}, {"grid", 128}};
  const RunOutcome out = run(parse_config(j));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.document["result"]["count"] == 0);
  CHECK(out.document["result"]["flags"]["exact_free_spectrum"] == true);

  const RunOutcome cmp = compare(parse_config(j));
  CHECK(cmp.exit_code == kExitOk);
  CHECK(cmp.document["result"]["certified_count"] == 0);
  CHECK(cmp.document["result"]["oracle_count"] == 0);
}

TEST_CASE("compare on a small box and with a stronger well") {
  json j = base("rayleigh-ritz");
  j["oracle"] = {{"box_edge", 20.0}, {"grid", 128}};
  const RunOutcome normal = compare(parse_config(j));
  CHECK(normal.exit_code == kExitOk);
  CHECK(normal.document["result"]["oracle_count_ge_certified"] == true);

  j["potential"]["params"]["depth"] = 4.0;
  const RunOutcome strong = compare(parse_config(j));
  CHECK(strong.exit_code == kExitOk);
  CHECK(strong.document["result"]["certified_count"] >= normal.document["result"]["certified_count"]);
  CHECK(strong.document["result"]["oracle_count"] >= normal.document["result"]["oracle_count"]);
}

TEST_CASE("spin-orbit task") {
  json j = {{"task", "spin-orbit"},
            {"potential", {{"kind", "gaussian-well"}, {"params", {{"depth", 1.0}, {"width", 1.0}}}}},
            {"spin_orbit", {{"kind", "rashba"}, {"alpha", 1.0}, {"count", 1}}}};
  const RunOutcome out = run(parse_config(j));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.document["symbol"]["bottom"] == -0.25);
  CHECK(out.document["result"]["certificate"]["certified"] == true);
}

TEST_CASE("identical configs give byte-identical output") {
  const auto dir = std::filesystem::temp_directory_path() / "degen-determinism";
  std::filesystem::remove_all(dir);
  json j = base("rayleigh-ritz");
  j["surface"] = {{"resolution", 32}};
  const auto first = write_outcome(run(parse_config(j)), dir / "a", "rr");
  const auto second = write_outcome(run(parse_config(j)), dir / "b", "rr");
  CHECK(slurp(first) == slurp(second));
  CHECK(slurp(dir / "a" / "rr.csv") == slurp(dir / "b" / "rr.csv"));

  // Re-running the echoed config reproduces the result block.
  const json doc = json::parse(slurp(first));
  const RunOutcome echoed = run(parse_config(doc["config"]));
  CHECK(echoed.document["result"] == doc["result"]);
  std::filesystem::remove_all(dir);
}
