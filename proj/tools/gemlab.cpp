// Batch experiment runner. Exit codes: 0 ok, 1 bad configuration, 2 runtime failure.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gemlab/errors.hpp"
#include "gemlab/experiment.hpp"

namespace {

constexpr int kConfigExit = 1;
constexpr int kRuntimeExit = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group Even-Mansour and Feistel experiments"};
  gemlab::ExperimentConfig cfg;
  std::string kind;
  std::string format = "json";

  app.add_option("--group", cfg.group, "group spec, e.g. zmod:4096 or prod:(sym:3,zmod:5)")->required();
  app.add_option("--experiment", kind,
                 "slide | feistel1 | feistel2 | feistel3 | psi-advantage | em-advantage | efp | cp | "
                 "game-equivalence | bad-event-rate")
      ->required();
  app.add_option("--trials", cfg.trials, "independent trials (samples per world for advantages)")
      ->required();
  app.add_option("--seed", cfg.seed, "master seed")->required();
  app.add_option("--qc", cfg.budget.qc, "cipher queries");
  app.add_option("--qf", cfg.budget.qf, "f queries");
  app.add_option("--qg", cfg.budget.qg, "g queries");
  app.add_option("--s", cfg.budget.s, "E/D queries (script length for game-equivalence)");
  app.add_option("--t", cfg.budget.t, "P/P^-1 queries");
  app.add_option("--d", cfg.d, "slide samples per side");
  app.add_option("--out", cfg.out, "report path; stdout if omitted or -");
  app.add_option("--format", format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    cfg.kind = gemlab::parse_experiment_kind(kind);
    cfg.format = gemlab::parse_report_format(format);
    gemlab::validate(cfg);
  } catch (const gemlab::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigExit;
  }

  try {
    const gemlab::Report report = gemlab::run_experiment(cfg);
    gemlab::emit_report(report, cfg.format, cfg.out);
  } catch (const gemlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeExit;
  }
  return 0;
}
