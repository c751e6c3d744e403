#ifndef DADMM_EXPERIMENT_HPP
#define DADMM_EXPERIMENT_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dadmm/admm.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/graph.hpp"
#include "dadmm/problem.hpp"
#include "dadmm/problem_io.hpp"

namespace dadmm {

// Experiment files are flat-sectioned key-value text:
//
//   # comment
//   [problem]
//   instance = sparse_pca
//   n = 10
//   [solver]
//   mode = distributed
//   [run schedule]        # one section per labeled run, overriding [solver]
//   zeta = 0.5
//
// Unknown sections and keys are errors.

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct ConfigSection {
  std::string name;   ///< "problem", "graph", "solver", "output" or "run"
  std::string label;  ///< run label for [run LABEL]
  std::size_t line = 0;
  std::vector<ConfigEntry> entries;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::vector<ConfigSection> parse_config_sections(std::istream& in,
                                                        const std::string& origin) {
  std::vector<ConfigSection> sections;
  std::string raw;
  std::size_t lineno = 0;
  auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      std::istringstream hs(line.substr(1, line.size() - 2));
      ConfigSection sec;
      sec.line = lineno;
      hs >> sec.name >> sec.label;
      std::string extra;
      if (hs >> extra) throw ConfigError(where() + "section header has trailing text");
      static const std::set<std::string> known{"problem", "graph", "solver", "output", "run"};
      if (!known.count(sec.name)) throw ConfigError(where() + "unknown section [" + sec.name + "]");
      if (sec.name == "run" && sec.label.empty())
        throw ConfigError(where() + "[run] sections need a label: [run NAME]");
      if (sec.name != "run" && !sec.label.empty())
        throw ConfigError(where() + "only [run] sections take a label");
      sections.push_back(std::move(sec));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    if (sections.empty()) throw ConfigError(where() + "key outside of any section");
    ConfigEntry e{detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), lineno};
    if (e.key.empty()) throw ConfigError(where() + "empty key");
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

struct ProblemBlock {
  std::string instance = "sparse_pca";  ///< sparse_pca | quadratic_consensus
  std::string file;                     ///< load a serialized instance instead of generating
  std::size_t n = 10;
  std::size_t p = 50;
  std::size_t m = 20;
  double lambda = 1.0;
  double sigma = 0.1;
  double radius = 1.0;
  std::uint64_t seed = 1;
};

struct GraphBlock {
  std::string topology = "ring";  ///< ring | complete | edges
  std::string edges;              ///< edge-list path when topology = edges
};

struct SolverBlock {
  Mode mode = Mode::Distributed;
  std::optional<double> beta;
  double beta_margin = 2.05;
  double delta = 1e-6;
  std::size_t max_rounds = 2000;
  std::size_t check_every = 1;
  double zeta = 0.5;
  std::size_t t_min = 1;
  std::optional<std::size_t> steps;  ///< fixed consensus steps per round
  InitMode init = InitMode::Random;
  double init_scale = 1.0;
  std::optional<std::uint64_t> init_seed;
};

struct OutputBlock {
  std::string dir = "out";
  std::string plot = "convergence";  ///< plot file prefix; empty disables plots in `run`
  std::string instance = "instance.txt";
};

struct RunSpec {
  std::string label;
  std::vector<ConfigEntry> overrides;
};

struct ExperimentConfig {
  ProblemBlock problem;
  GraphBlock graph;
  SolverBlock solver;
  OutputBlock output;
  std::vector<RunSpec> runs;
};

namespace detail {

template <typename T>
T parse_number(const ConfigEntry& e, const std::string& origin) {
  T v{};
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end || e.value.empty())
    throw ConfigError(origin + ":" + std::to_string(e.line) + ": key '" + e.key +
                      "': cannot parse '" + e.value + "'");
  return v;
}

inline std::string key_error(const ConfigEntry& e, const std::string& origin,
                             const std::string& section) {
  return origin + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "' in [" + section +
         "]";
}

inline void apply_problem(ProblemBlock& b, const ConfigEntry& e, const std::string& origin) {
  if (e.key == "instance") {
    if (e.value != "sparse_pca" && e.value != "quadratic_consensus")
      throw ConfigError(origin + ":" + std::to_string(e.line) + ": unknown instance type '" +
                        e.value + "'");
    b.instance = e.value;
  } else if (e.key == "file") b.file = e.value;
  else if (e.key == "n") b.n = parse_number<std::size_t>(e, origin);
  else if (e.key == "p") b.p = parse_number<std::size_t>(e, origin);
  else if (e.key == "m") b.m = parse_number<std::size_t>(e, origin);
  else if (e.key == "lambda") b.lambda = parse_number<double>(e, origin);
  else if (e.key == "sigma") b.sigma = parse_number<double>(e, origin);
  else if (e.key == "radius") b.radius = parse_number<double>(e, origin);
  else if (e.key == "seed") b.seed = parse_number<std::uint64_t>(e, origin);
  else throw ConfigError(key_error(e, origin, "problem"));
}

inline void apply_graph(GraphBlock& b, const ConfigEntry& e, const std::string& origin) {
  if (e.key == "topology") {
    if (e.value != "ring" && e.value != "complete" && e.value != "edges")
      throw ConfigError(origin + ":" + std::to_string(e.line) + ": unknown topology '" +
                        e.value + "'");
    b.topology = e.value;
  } else if (e.key == "edges") b.edges = e.value;
  else throw ConfigError(key_error(e, origin, "graph"));
}

inline void apply_solver(SolverBlock& b, const ConfigEntry& e, const std::string& origin,
                         const std::string& section = "solver") {
  if (e.key == "mode") {
    try {
      b.mode = parse_mode(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(origin + ":" + std::to_string(e.line) + ": " + err.what());
    }
  } else if (e.key == "beta") b.beta = parse_number<double>(e, origin);
  else if (e.key == "beta_margin") b.beta_margin = parse_number<double>(e, origin);
  else if (e.key == "delta") b.delta = parse_number<double>(e, origin);
  else if (e.key == "max_rounds") b.max_rounds = parse_number<std::size_t>(e, origin);
  else if (e.key == "check_every") b.check_every = parse_number<std::size_t>(e, origin);
  else if (e.key == "zeta") b.zeta = parse_number<double>(e, origin);
  else if (e.key == "t_min") b.t_min = parse_number<std::size_t>(e, origin);
  else if (e.key == "steps") b.steps = parse_number<std::size_t>(e, origin);
  else if (e.key == "init") {
    if (e.value == "zero") b.init = InitMode::Zero;
    else if (e.value == "random") b.init = InitMode::Random;
    else throw ConfigError(origin + ":" + std::to_string(e.line) + ": init must be zero or random");
  } else if (e.key == "init_scale") b.init_scale = parse_number<double>(e, origin);
  else if (e.key == "init_seed") b.init_seed = parse_number<std::uint64_t>(e, origin);
  else throw ConfigError(key_error(e, origin, section));
}

inline void apply_output(OutputBlock& b, const ConfigEntry& e, const std::string& origin) {
  if (e.key == "dir") b.dir = e.value;
  else if (e.key == "plot") b.plot = e.value;
  else if (e.key == "instance") b.instance = e.value;
  else throw ConfigError(key_error(e, origin, "output"));
}

}  // namespace detail

/// Layers parsed sections over `cfg`. Any [run] section replaces the
/// inherited run list.
inline void apply_sections(ExperimentConfig& cfg, const std::vector<ConfigSection>& sections,
                           const std::string& origin) {
  std::vector<RunSpec> runs;
  std::set<std::string> labels;
  for (const auto& sec : sections) {
    for (const auto& e : sec.entries) {
      if (sec.name == "problem") detail::apply_problem(cfg.problem, e, origin);
      else if (sec.name == "graph") detail::apply_graph(cfg.graph, e, origin);
      else if (sec.name == "solver") detail::apply_solver(cfg.solver, e, origin);
      else if (sec.name == "output") detail::apply_output(cfg.output, e, origin);
    }
    if (sec.name == "run") {
      if (!labels.insert(sec.label).second)
        throw ConfigError(origin + ":" + std::to_string(sec.line) + ": duplicate run label '" +
                          sec.label + "'");
      SolverBlock scratch;
      for (const auto& e : sec.entries)
        detail::apply_solver(scratch, e, origin, "run " + sec.label);
      runs.push_back(RunSpec{sec.label, sec.entries});
    }
  }
  if (!runs.empty()) cfg.runs = std::move(runs);
}

inline void load_experiment_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_sections(cfg, parse_config_sections(in, path), path);
}

/// test: desk-scale sparse PCA comparing centralized, scheduled and naive.
/// repro: the n=20, p=500 experiment with a fixed-step sweep.
inline ExperimentConfig profile_config(const std::string& profile) {
  ExperimentConfig cfg;
  auto run = [](std::string label, std::vector<std::pair<std::string, std::string>> kv) {
    RunSpec r{std::move(label), {}};
    for (auto& [k, v] : kv) r.overrides.push_back(ConfigEntry{k, v, 0});
    return r;
  };
  if (profile == "test") {
    cfg.problem = ProblemBlock{"sparse_pca", "", 10, 50, 20, 1.0, 0.1, 1.0, 1};
    cfg.solver.max_rounds = 2000;
    cfg.runs = {run("centralized", {{"mode", "centralized"}}),
                run("schedule", {{"mode", "distributed"}}),
                run("naive", {{"mode", "naive"}})};
  } else if (profile == "repro") {
    cfg.problem = ProblemBlock{"sparse_pca", "", 20, 500, 100, 10.0, 0.1, 1.0, 1};
    cfg.solver.max_rounds = 1000;
    cfg.runs = {run("centralized", {{"mode", "centralized"}}),
                run("schedule", {{"mode", "distributed"}}),
                run("tau1", {{"mode", "naive"}}),
                run("tau2", {{"mode", "distributed"}, {"steps", "2"}}),
                run("tau5", {{"mode", "distributed"}, {"steps", "5"}}),
                run("tau10", {{"mode", "distributed"}, {"steps", "10"}})};
  } else {
    throw ConfigError("unknown profile '" + profile + "' (expected test or repro)");
  }
  return cfg;
}

/// Runs to execute: the labeled list, or a single run named after the mode.
inline std::vector<std::pair<std::string, SolverBlock>> resolve_runs(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, SolverBlock>> out;
  if (cfg.runs.empty()) {
    out.emplace_back(to_string(cfg.solver.mode), cfg.solver);
    return out;
  }
  for (const auto& r : cfg.runs) {
    SolverBlock s = cfg.solver;
    for (const auto& e : r.overrides) detail::apply_solver(s, e, "<run " + r.label + ">");
    out.emplace_back(r.label, s);
  }
  return out;
}

inline ProblemSpec build_problem(const ProblemBlock& b) {
  if (!b.file.empty()) return load_instance(b.file);
  if (b.instance == "quadratic_consensus") return make_quadratic_consensus(b.n, b.p, b.seed);
  return make_sparse_pca(b.n, b.p, b.m, b.lambda, b.sigma, b.seed, b.radius);
}

inline WeightMatrix build_weights(const GraphBlock& g, std::size_t n) {
  if (g.topology == "complete") return metropolis_hastings_weights(build_complete(n));
  if (g.topology == "edges") {
    if (g.edges.empty()) throw ConfigError("topology = edges needs an 'edges' file");
    return metropolis_hastings_weights(load_edge_list(g.edges, n));
  }
  return metropolis_hastings_weights(build_ring(n));
}

inline RunConfig make_run_config(const SolverBlock& s, const ProblemSpec& prob,
                                 const WeightMatrix& w, std::uint64_t seed) {
  RunConfig c;
  c.beta = s.beta ? *s.beta : prob.default_beta(s.beta_margin);
  c.delta = s.delta;
  c.max_rounds = s.max_rounds;
  c.mode = s.mode;
  c.schedule = ConsensusSchedule{s.zeta, w.rho, w.c, s.t_min};
  c.fixed_steps = s.steps;
  c.seed = s.init_seed ? *s.init_seed : seed;
  c.check_every = s.check_every;
  c.init = s.init;
  c.init_scale = s.init_scale;
  return c;
}

}  // namespace dadmm

#endif  // DADMM_EXPERIMENT_HPP
