// ncball <experiment> --config <path> [--seed S] [--out <prefix>] [--levels 1,2,3] [--budget N]
// ncball --list

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ncball/explab.hpp"
#include "ncball/version.hpp"

namespace ex = ncball::explab;

int main(int argc, char** argv) {
  CLI::App app{"Seeded experiments on nc operator balls"};
  app.set_version_flag("--version", ncball::kVersion);

  bool list = false;
  std::string experiment, config_path, out;
  std::uint64_t seed = 0;
  std::vector<int> levels;
  int budget = 0;

  app.add_flag("--list", list, "List experiments and exit");
  app.add_option("experiment", experiment, "Experiment name (see --list)");
  auto* config_opt = app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  auto* out_opt = app.add_option("--out", out, "Output prefix; writes <prefix>.csv and <prefix>.json");
  auto* levels_opt = app.add_option("--levels", levels, "Override the config levels, e.g. 1,2,3")->delimiter(',');
  auto* budget_opt = app.add_option("--budget", budget, "Override the config budget")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& e : ex::experiments()) std::printf("%-12s %s\n", e.name.c_str(), e.anchor.c_str());
    return 0;
  }
  if (experiment.empty()) {
    std::cerr << "error: an experiment name is required (see --list)\n";
    return 2;
  }

  try {
    ex::experiment_info(experiment);
    ncball::Json j = ncball::Json{{"experiment", experiment}};
    if (*config_opt) {
      std::ifstream f(config_path);
      j = ncball::Json::parse(f);
      if (j.value("experiment", experiment) != experiment) {
        std::cerr << "error: config is for experiment '" << j.value("experiment", "") << "'\n";
        return 2;
      }
      j["experiment"] = experiment;
    }
    if (*seed_opt) j["seed"] = seed;
    if (*levels_opt) j["levels"] = levels;
    if (*budget_opt) j["budget"] = budget;
    if (*out_opt) j["output"] = out;
    const ex::ExperimentConfig config = ex::parse_config(j);

    const ex::ExperimentReport report = ex::run(config);
    const std::string prefix = config.output.empty() ? "results/" + experiment : config.output;
    ex::write_report(report, prefix);
    for (const auto& r : report.rows)
      std::printf("%-4s %-48s value=%.12g reference=%.12g tol=%.3g\n", r.pass ? "PASS" : "FAIL", r.check_id.c_str(),
                  r.value, r.reference, r.tolerance);
    std::printf("%s: %s (%.2f s) -> %s.{csv,json}\n", experiment.c_str(), report.all_pass() ? "PASS" : "FAIL",
                report.wall_seconds, prefix.c_str());
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
