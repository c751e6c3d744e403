#ifndef DADMM_COMMANDS_HPP
#define DADMM_COMMANDS_HPP

#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dadmm/admm.hpp"
#include "dadmm/experiment.hpp"
#include "dadmm/metrics.hpp"
#include "dadmm/problem_io.hpp"
#include "dadmm/svg_plot.hpp"

namespace dadmm {

/// 0: clean stop or max_rounds reached, 1: usage/config/I-O error, 2: divergence.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitDivergence = 2 };

namespace detail {
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace detail

/// Writes the problem instance to <dir>/<instance> and reports L_max and
/// the default penalty.
inline int cmd_generate(const ExperimentConfig& cfg, std::ostream& log) {
  ProblemSpec prob = build_problem(cfg.problem);
  std::filesystem::create_directories(cfg.output.dir);
  const std::string path = (std::filesystem::path(cfg.output.dir) / cfg.output.instance).string();
  save_instance(path, prob);
  const double L = prob.lipschitz_max();
  log << "instance: " << path << '\n'
      << "agents: " << prob.agents() << ", dimension: " << prob.dimension() << '\n'
      << "L_max: " << detail::fmt(L) << "  (2 max lambda_max(A_i))\n"
      << "default beta: " << detail::fmt(prob.default_beta(cfg.solver.beta_margin))
      << "  (beta_margin " << detail::fmt(cfg.solver.beta_margin) << " x L_max)\n";
  return kExitOk;
}

struct LabeledRun {
  std::string label;
  std::string csv_path;
  std::optional<RunResult> result;
  std::string error;
  bool diverged = false;
};

/// Executes every labeled run, writing <dir>/<label>.csv for each. Runs are
/// independent and may execute concurrently (`jobs` > 1); each stays
/// deterministic.
inline int cmd_run(const ExperimentConfig& cfg, std::ostream& log, unsigned jobs = 1) {
  const ProblemSpec prob = build_problem(cfg.problem);
  const WeightMatrix w = build_weights(cfg.graph, prob.agents());
  const auto specs = resolve_runs(cfg);
  std::filesystem::create_directories(cfg.output.dir);

  std::vector<LabeledRun> runs;
  std::vector<RunConfig> configs;
  for (const auto& [label, block] : specs) {
    runs.push_back(LabeledRun{label, (std::filesystem::path(cfg.output.dir) / (label + ".csv")).string(),
                              std::nullopt, {}, false});
    configs.push_back(make_run_config(block, prob, w, cfg.problem.seed));
    configs.back().validate(prob);
  }

  auto execute = [&](std::size_t k) {
    try {
      runs[k].result = run(prob, configs[k], w);
      write_csv(runs[k].result->records, runs[k].csv_path);
    } catch (const DivergenceError& e) {
      runs[k].diverged = true;
      runs[k].error = e.what();
    }
  };

  if (jobs <= 1) {
    for (std::size_t k = 0; k < runs.size(); ++k) execute(k);
  } else {
    for (std::size_t start = 0; start < runs.size(); start += jobs) {
      std::vector<std::future<void>> batch;
      for (std::size_t k = start; k < std::min(runs.size(), start + jobs); ++k)
        batch.push_back(std::async(std::launch::async, execute, k));
      for (auto& f : batch) f.get();
    }
  }

  int code = kExitOk;
  std::vector<std::pair<std::string, std::vector<MetricsRecord>>> curves;
  log << "rho = " << detail::fmt(w.rho) << ", beta = " << detail::fmt(configs.front().beta)
      << '\n';
  for (const auto& r : runs) {
    if (r.diverged) {
      log << r.label << ": DIVERGED (" << r.error << ")\n";
      code = kExitDivergence;
      continue;
    }
    const auto& last = r.result->records.back();
    log << r.label << ": " << (r.result->converged ? "stopped" : "max_rounds") << " at r = "
        << last.r << ", G = " << detail::fmt(last.G) << ", D = " << detail::fmt(last.D)
        << ", comm = " << last.cumulative_comm << " -> " << r.csv_path << '\n';
    curves.emplace_back(r.label, r.result->records);
  }
  if (!cfg.output.plot.empty() && !curves.empty()) {
    const auto prefix = (std::filesystem::path(cfg.output.dir) / cfg.output.plot).string();
    for (const auto& p : write_convergence_plots(curves, prefix)) log << "plot: " << p << '\n';
  }
  return code;
}

/// Labels default to the CSV file stems.
inline int cmd_plot(const std::vector<std::string>& csv_paths, std::vector<std::string> labels,
                    const std::string& prefix, bool communication_axis, std::ostream& log) {
  if (csv_paths.empty()) throw ConfigError("plot needs at least one CSV file");
  if (!labels.empty() && labels.size() != csv_paths.size())
    throw ConfigError("got " + std::to_string(labels.size()) + " labels for " +
                      std::to_string(csv_paths.size()) + " CSV files");
  std::vector<std::pair<std::string, std::vector<MetricsRecord>>> curves;
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    const std::string label =
        labels.empty() ? std::filesystem::path(csv_paths[i]).stem().string() : labels[i];
    curves.emplace_back(label, read_csv(csv_paths[i]));
  }
  if (auto parent = std::filesystem::path(prefix).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  for (const auto& p : write_convergence_plots(curves, prefix, communication_axis))
    log << "plot: " << p << '\n';
  return kExitOk;
}

}  // namespace dadmm

#endif  // DADMM_COMMANDS_HPP
