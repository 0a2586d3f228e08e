#include "degen/errors.hpp"
#include "degen/experiment.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <iostream>

namespace {

struct Arguments {
  std::string config;
  std::string output = ".";
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

int execute(const Arguments& args, bool comparing) {
  try {
#ifdef _OPENMP
    if (args.threads > 0) omp_set_num_threads(args.threads);
#endif
    degen::ExperimentConfig config = degen::load_config(args.config);
    if (args.seed) config.seed = *args.seed;
    const degen::RunOutcome outcome = comparing ? degen::compare(config) : degen::run(config);
    const std::string stem = comparing ? config.name + "-compare" : config.name;
    const auto path = degen::write_outcome(outcome, args.output, stem);
    std::cout << path.string() << '\n';
    if (outcome.exit_code == degen::kExitCertificationFailed) {
      std::cerr << "certification failed: no scheduled transverse scale gives a negative definite form\n";
    } else if (outcome.exit_code == degen::kExitCompareViolation) {
      std::cerr << "comparison violated: oracle count is below the certified count\n";
    }
    return outcome.exit_code;
  } catch (const degen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return degen::kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states below a degenerate band bottom: surface operators, variational certificates "
               "and a grid oracle"};
  app.set_version_flag("--version", std::string(DEGEN_VERSION));
  app.require_subcommand(1);

  Arguments args;
  auto add_common = [&args](CLI::App* cmd) {
    cmd->add_option("config", args.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", args.output, "Directory for result files")->capture_default_str();
    cmd->add_option("--threads", args.threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", args.seed, "Overrides the config seed");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "Run the configured task");
  add_common(run_cmd);
  CLI::App* compare_cmd = app.add_subcommand("compare", "Certified count against the grid oracle count");
  add_common(compare_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : degen::kExitError;
  }
  return execute(args, compare_cmd->parsed());
}
