#ifndef DADMM_ADMM_HPP
#define DADMM_ADMM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dadmm/consensus.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/graph.hpp"
#include "dadmm/metrics.hpp"
#include "dadmm/problem.hpp"
#include "dadmm/state.hpp"

namespace dadmm {

/// centralized: exact averaging through a virtual hub.
/// distributed: t_r consensus steps per round from the schedule (or a fixed count).
/// naive: a single neighbour-averaging step per round.
enum class Mode { Distributed, Centralized, Naive };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Distributed: return "distributed";
    case Mode::Centralized: return "centralized";
    case Mode::Naive: return "naive";
  }
  return "distributed";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "distributed") return Mode::Distributed;
  if (s == "centralized") return Mode::Centralized;
  if (s == "naive") return Mode::Naive;
  throw ConfigError("unknown mode '" + s + "' (expected distributed, centralized or naive)");
}

enum class InitMode { Zero, Random };

struct RunConfig {
  double beta = 1.0;
  double delta = 1e-6;
  std::size_t max_rounds = 1000;
  Mode mode = Mode::Distributed;
  ConsensusSchedule schedule;
  /// Distributed mode only: run this many consensus steps every round
  /// instead of following the schedule.
  std::optional<std::size_t> fixed_steps;
  std::uint64_t seed = 0;
  std::size_t check_every = 1;

  /// Zero: x_i = 0. Random: every agent starts from the same point drawn
  /// uniformly from the sphere of radius init_scale (seeded by `seed`).
  InitMode init = InitMode::Zero;
  double init_scale = 1.0;
  std::optional<std::vector<Vector>> init_x;
  std::optional<std::vector<Vector>> init_lambda;
  std::optional<std::vector<Vector>> init_x0;

  /// Require (beta - L)/2 - L^2/beta > 0 so the augmented Lagrangian
  /// strictly decreases in centralized mode.
  bool strict_descent = false;

  void validate(const ProblemSpec& prob) const {
    const double L = prob.lipschitz_max();
    if (!(beta > L))
      throw ConfigError("beta = " + std::to_string(beta) + " must exceed L_max = " +
                        std::to_string(L));
    if (strict_descent && !((beta - L) / 2.0 - L * L / beta > 0.0))
      throw ConfigError("beta = " + std::to_string(beta) +
                        " violates (beta - L)/2 - L^2/beta > 0 required for strict descent");
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    if (check_every < 1) throw ConfigError("check_every must be >= 1");
    if (fixed_steps && *fixed_steps < 1) throw ConfigError("fixed consensus steps must be >= 1");
    if (mode == Mode::Distributed && !fixed_steps) schedule.validate();
  }
};

struct StopResiduals {
  double grad_res = 0.0;
  double subgrad_res = 0.0;
  double feas_res = 0.0;

  double max() const { return std::max({grad_res, subgrad_res, feas_res}); }
};

struct RoundOutcome {
  std::size_t r = 0;
  std::size_t t_r = 0;
  StopResiduals residuals;
  bool stopped = false;
};

/// One cached subproblem solver per agent, built once for a fixed beta.
class LocalSolvers {
 public:
  LocalSolvers(const ProblemSpec& prob, double beta,
               SubproblemMethod method = SubproblemMethod::Auto) {
    solvers_.reserve(prob.agents());
    for (const auto& f : prob.locals) solvers_.emplace_back(f, beta, method);
  }

  const SubproblemSolver& operator[](std::size_t i) const { return solvers_[i]; }
  std::size_t size() const noexcept { return solvers_.size(); }
  double beta() const { return solvers_.front().beta(); }

 private:
  std::vector<SubproblemSolver> solvers_;
};

/// Default start: x_i = 0 and lambda_i = -grad f_i(x_i), so the primal
/// optimality identity grad f_i(x_i) + lambda_i = 0 already holds; x0_i = 0.
inline AgentStates initialize(const ProblemSpec& prob, const RunConfig& config) {
  prob.validate();
  const std::size_t n = prob.agents();
  const auto p = static_cast<Eigen::Index>(prob.dimension());

  auto check = [&](const std::optional<std::vector<Vector>>& v, const char* what) {
    if (!v) return;
    if (v->size() != n)
      throw ShapeError(std::string(what) + ": expected " + std::to_string(n) + " vectors");
    for (std::size_t i = 0; i < n; ++i)
      if ((*v)[i].size() != p)
        throw ShapeError(std::string(what) + "[" + std::to_string(i) + "] has length " +
                         std::to_string((*v)[i].size()) + ", expected " + std::to_string(p));
  };
  check(config.init_x, "init_x");
  check(config.init_lambda, "init_lambda");
  check(config.init_x0, "init_x0");

  Vector start = Vector::Zero(p);
  if (config.init == InitMode::Random && !config.init_x) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index k = 0; k < p; ++k) start[k] = normal(rng);
    start *= config.init_scale / start.norm();
  }

  AgentStates states(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = states[i];
    s.x = config.init_x ? (*config.init_x)[i] : start;
    s.lambda = config.init_lambda ? (*config.init_lambda)[i] : Vector(-prob.locals[i].gradient(s.x));
    s.x0 = config.init_x0 ? (*config.init_x0)[i] : Vector(Vector::Zero(p));
    s.xtilde = s.x;
    s.lambdatilde = s.lambda;
    s.y0 = s.x0;
  }
  return states;
}

/// grad_res = max_i ||grad f_i(x_i) + lambda_i||,
/// subgrad_res = max_i ||s0_i - n lambdatilde_i|| with s0_i = n beta (y0_i - x0_i)
/// the subgradient of g at x0_i certified by the prox step,
/// feas_res = max_i ||x_i - x0_i||.
inline StopResiduals compute_stop_residuals(const AgentStates& states, const ProblemSpec& prob,
                                            double beta) {
  const double n = static_cast<double>(states.size());
  StopResiduals res;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    res.grad_res = std::max(res.grad_res, (prob.locals[i].gradient(s.x) + s.lambda).norm());
    const Vector s0 = n * beta * (s.y0 - s.x0);
    res.subgrad_res = std::max(res.subgrad_res, (s0 - n * s.lambdatilde).norm());
    res.feas_res = std::max(res.feas_res, (s.x - s.x0).norm());
  }
  return res;
}

namespace detail {

inline void primal_dual_update(AgentStates& states, const LocalSolvers& solvers) {
  const double beta = solvers.beta();
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& s = states[i];
    s.x = solvers[i].solve(s.lambda, s.x0);
    s.lambda += beta * (s.x - s.x0);
  }
}

}  // namespace detail

/// Hub round: xtilde = (1/n) sum_j (x_j + lambda_j / beta),
/// x0 = prox_{g/(n beta)}(xtilde) shared by every agent, then each agent's
/// primal solve and dual ascent against x0.
inline void centralized_round(AgentStates& states, const ProblemSpec& prob,
                              const LocalSolvers& solvers) {
  const double beta = solvers.beta();
  const double n = static_cast<double>(states.size());
  const auto p = states.front().x.size();
  Vector xbar = Vector::Zero(p);
  Vector lbar = Vector::Zero(p);
  for (const auto& s : states) {
    xbar += s.x;
    lbar += s.lambda;
  }
  xbar /= n;
  lbar /= n;
  const Vector y0 = xbar + lbar / beta;
  const Vector x0 = prob.regularizer.prox(1.0 / (n * beta), y0);
  for (auto& s : states) {
    s.xtilde = xbar;
    s.lambdatilde = lbar;
    s.y0 = y0;
    s.x0 = x0;
  }
  detail::primal_dual_update(states, solvers);
}

inline void centralized_round(AgentStates& states, const ProblemSpec& prob, double beta) {
  centralized_round(states, prob, LocalSolvers(prob, beta));
}

/// Decentralized round: t_r joint consensus steps on the stacked [x; lambda]
/// give each agent estimates xtilde_i, lambdatilde_i of the network means;
/// the agent forms y0_i = xtilde_i + lambdatilde_i / beta, takes its own prox
/// x0_i = prox_{g/(n beta)}(y0_i), then solves and updates its dual.
inline void distributed_round(AgentStates& states, const ProblemSpec& prob,
                              const WeightMatrix& w, const LocalSolvers& solvers,
                              std::size_t t_r) {
  if (t_r < 1) throw ConfigError("distributed round needs at least one consensus step");
  const double beta = solvers.beta();
  const std::size_t n = states.size();
  const auto p = states.front().x.size();

  NodeVectors stacked(n, Vector(2 * p));
  for (std::size_t i = 0; i < n; ++i) stacked[i] << states[i].x, states[i].lambda;
  const auto mixed = consensus_steps(w, stacked, t_r);

  const double gamma = 1.0 / (static_cast<double>(n) * beta);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = states[i];
    s.xtilde = mixed.estimates[i].head(p);
    s.lambdatilde = mixed.estimates[i].tail(p);
    s.y0 = s.xtilde + s.lambdatilde / beta;
    s.x0 = prob.regularizer.prox(gamma, s.y0);
  }
  detail::primal_dual_update(states, solvers);
}

inline void distributed_round(AgentStates& states, const ProblemSpec& prob,
                              const WeightMatrix& w, double beta, std::size_t t_r) {
  distributed_round(states, prob, w, LocalSolvers(prob, beta), t_r);
}

/// Consensus steps the given mode spends in round r (1-based).
inline std::size_t consensus_steps_for(const RunConfig& config, std::size_t r) {
  switch (config.mode) {
    case Mode::Centralized: return 0;
    case Mode::Naive: return 1;
    case Mode::Distributed:
      return config.fixed_steps ? *config.fixed_steps : steps_for_round(config.schedule, r);
  }
  return 1;
}

struct RunResult {
  std::vector<MetricsRecord> records;
  AgentStates states;
  bool converged = false;  ///< stopped by the residual test rather than max_rounds
};

inline void check_finite(const AgentStates& states, std::size_t r) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    if (!s.x.allFinite() || !s.lambda.allFinite() || !s.x0.allFinite()) {
      throw DivergenceError(r, i,
                            "non-finite iterate at round " + std::to_string(r) + ", agent " +
                                std::to_string(i));
    }
  }
}

/// Observer invoked after every round with the post-round states.
using RoundObserver = std::function<void(const AgentStates&, const MetricsRecord&)>;

/// Runs rounds until every stopping residual is below delta (tested every
/// check_every rounds) or max_rounds is reached. One record per round.
inline RunResult run(const ProblemSpec& prob, const RunConfig& config, const WeightMatrix& w,
                     const RoundObserver& observer = {}) {
  config.validate(prob);
  if (config.mode != Mode::Centralized && w.size() != prob.agents())
    throw ShapeError("weight matrix is " + std::to_string(w.size()) + " x " +
                     std::to_string(w.size()) + " but the problem has " +
                     std::to_string(prob.agents()) + " agents");

  RunResult result;
  result.states = initialize(prob, config);
  const LocalSolvers solvers(prob, config.beta);
  std::size_t comm = 0;

  for (std::size_t r = 1; r <= config.max_rounds; ++r) {
    const std::size_t t = consensus_steps_for(config, r);
    if (config.mode == Mode::Centralized)
      centralized_round(result.states, prob, solvers);
    else
      distributed_round(result.states, prob, w, solvers, t);
    check_finite(result.states, r);

    comm += t;
    const auto res = compute_stop_residuals(result.states, prob, config.beta);
    MetricsRecord rec{r,
                      augmented_lagrangian(result.states, prob, config.beta),
                      prox_gradient_gap(result.states, prob),
                      disagreement_gap(result.states),
                      res.grad_res,
                      res.subgrad_res,
                      res.feas_res,
                      t,
                      comm};
    result.records.push_back(rec);
    if (observer) observer(result.states, rec);

    if (r % config.check_every == 0 && res.max() < config.delta) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace dadmm

#endif  // DADMM_ADMM_HPP
