// Command-line front end for the experiment runner.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "hamest/errors.hpp"
#include "hamest/experiment.hpp"
#include "hamest/tolerances.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kComputeExit = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  int jobs = 1;
};

int execute(hamest::Mode mode, const Options& opt) {
  hamest::tolerances();  // surfaces a bad HAMEST_TOLERANCES before any work starts

  hamest::ExperimentConfig config =
      opt.config.empty() ? hamest::ExperimentConfig{} : hamest::load_config(opt.config);
  if (opt.seed) config.optimizer.seed = *opt.seed;
  if (!opt.out.empty()) config.output.path = opt.out;
  if (opt.format == "json") config.output.format = hamest::OutputFormat::json;
  if (opt.format == "csv") config.output.format = hamest::OutputFormat::csv;

  const hamest::RunResult result = hamest::run(config, mode, opt.jobs);
  const std::string body = config.output.format == hamest::OutputFormat::json
                               ? hamest::format_json(result, config)
                               : hamest::format_csv(result);
  const std::string summary = hamest::format_summary(result);
  if (!config.output.path.empty()) {
    hamest::write_atomically(config.output.path, body);
    std::cout << summary;
  } else {
    std::cout << body;
    std::cerr << summary;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian parameter estimation experiments"};
  app.require_subcommand(1);

  Options opt;
  struct Command {
    const char* name;
    const char* help;
    hamest::Mode mode;
  };
  const Command commands[] = {
      {"bound-compare", "CQFI against the controlled-energy bound over a time grid",
       hamest::Mode::bound_compare},
      {"optimize", "numerically maximized Fisher information over a time grid",
       hamest::Mode::optimize},
      {"pea-sweep", "phase-estimation Fisher information over t, n and m", hamest::Mode::pea_sweep},
      {"lemma-test", "random check of the spectral-gap maximizer", hamest::Mode::lemma_test},
      {"dump-family", "sample a family onto a grid file", hamest::Mode::dump_family},
  };
  std::optional<hamest::Mode> chosen;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config, "experiment config (YAML)")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "optimizer and sampling seed");
    sub->add_option("--out", opt.out, "output file; stdout when omitted");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, mode = c.mode] { chosen = mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    return execute(*chosen, opt);
  } catch (const hamest::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kComputeExit;
  }
}
