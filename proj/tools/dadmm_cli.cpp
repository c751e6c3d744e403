// dadmm: generate sparse-PCA instances, run decentralized / centralized ADMM
// experiments and plot their convergence curves.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dadmm/commands.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::string profile = "test";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_mode) {
  cmd->add_option("--config", o.config, "experiment config file");
  cmd->add_option("--profile", o.profile, "built-in defaults: test or repro")
      ->check(CLI::IsMember({"test", "repro"}));
  cmd->add_option("--seed", o.seed, "problem seed");
  cmd->add_option("--out", o.out, "output directory");
  if (with_mode)
    cmd->add_option("--mode", o.mode, "run a single mode: distributed, centralized or naive")
        ->check(CLI::IsMember({"distributed", "centralized", "naive"}));
}

// profile < config file < flags
dadmm::ExperimentConfig resolve(const CommonOptions& o) {
  auto cfg = dadmm::profile_config(o.profile);
  if (!o.config.empty()) dadmm::load_experiment_file(cfg, o.config);
  if (o.seed) cfg.problem.seed = *o.seed;
  if (o.out) cfg.output.dir = *o.out;
  if (o.mode) {
    cfg.solver.mode = dadmm::parse_mode(*o.mode);
    cfg.runs.clear();
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized ADMM simulator"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  auto* gen = app.add_subcommand("generate", "write a problem instance and report L_max / beta");
  add_common(gen, gen_opts, false);

  CommonOptions run_opts;
  unsigned jobs = 1;
  auto* runc = app.add_subcommand("run", "run the configured experiment, one CSV per run");
  add_common(runc, run_opts, true);
  runc->add_option("--jobs", jobs, "runs executed concurrently")->check(CLI::PositiveNumber);

  std::vector<std::string> csvs;
  std::vector<std::string> labels;
  std::string plot_out = ".";
  std::string plot_prefix = "convergence";
  bool comm_axis = false;
  auto* plot = app.add_subcommand("plot", "log10 G^r and log10 D^r curves as SVG");
  plot->add_option("csv", csvs, "metrics CSV files")->required();
  plot->add_option("--labels", labels, "legend labels (default: file stems)");
  plot->add_option("--out", plot_out, "output directory");
  plot->add_option("--prefix", plot_prefix, "output file prefix");
  plot->add_flag("--comm-axis", comm_axis, "also plot against cumulative consensus steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? dadmm::kExitOk : dadmm::kExitUsage;
  }

  try {
    if (*gen) return dadmm::cmd_generate(resolve(gen_opts), std::cout);
    if (*runc) return dadmm::cmd_run(resolve(run_opts), std::cout, jobs);
    if (*plot)
      return dadmm::cmd_plot(csvs, labels, plot_out + "/" + plot_prefix, comm_axis, std::cout);
  } catch (const dadmm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dadmm::kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dadmm::kExitUsage;
  }
  return dadmm::kExitUsage;
}
