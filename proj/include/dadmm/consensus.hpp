#ifndef DADMM_CONSENSUS_HPP
#define DADMM_CONSENSUS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dadmm/errors.hpp"
#include "dadmm/graph.hpp"

namespace dadmm {

using Vector = Eigen::VectorXd;
using NodeVectors = std::vector<Vector>;

/// Inner-loop length per outer round:
///   t_r = max(t_min, ceil((1 + zeta) / log(1/rho) * log r + log c / log(1/rho))).
struct ConsensusSchedule {
  double zeta = 0.5;
  double rho = 0.5;
  double c = 1.0;
  std::size_t t_min = 1;

  static ConsensusSchedule from_weights(const WeightMatrix& w, double zeta, std::size_t t_min = 1) {
    ConsensusSchedule s{zeta, w.rho, w.c, t_min};
    s.validate();
    return s;
  }

  void validate() const {
    if (!(zeta > 0.0)) throw ConfigError("schedule: zeta must be > 0");
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("schedule: rho must lie in (0, 1)");
    if (!(c > 0.0)) throw ConfigError("schedule: c must be > 0");
    if (t_min < 1) throw ConfigError("schedule: t_min must be >= 1");
  }
};

struct ConsensusResult {
  NodeVectors estimates;
  std::size_t steps_taken = 0;
  /// Only filled in oracle mode: max_i ||estimate_i - true mean||.
  std::optional<double> max_deviation;
};

namespace detail {

inline std::size_t common_dimension(const NodeVectors& values) {
  if (values.empty()) throw ShapeError("consensus needs at least one node value");
  const auto p = values.front().size();
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].size() != p) {
      throw ShapeError("node " + std::to_string(i) + " holds a vector of length " +
                       std::to_string(values[i].size()) + ", expected " + std::to_string(p));
    }
  }
  return static_cast<std::size_t>(p);
}

inline Vector node_mean(const NodeVectors& values) {
  Vector mean = Vector::Zero(values.front().size());
  for (const auto& v : values) mean += v;
  return mean / static_cast<double>(values.size());
}

}  // namespace detail

/// Applies W^t to the stacked node values, one synchronous averaging step at
/// a time. Each step evaluates sum_j W_ij v_j in increasing j, so results are
/// reproducible bit for bit.
inline ConsensusResult consensus_steps(const WeightMatrix& w, const NodeVectors& values,
                                       std::size_t t, bool oracle = false) {
  const std::size_t n = w.size();
  if (values.size() != n) {
    throw ShapeError("consensus got " + std::to_string(values.size()) + " node values for " +
                     std::to_string(n) + " nodes");
  }
  const std::size_t p = detail::common_dimension(values);

  std::vector<std::vector<std::size_t>> support(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (w.W(i, j) != 0.0) support[i].push_back(j);

  NodeVectors cur = values;
  NodeVectors next(n, Vector(p));
  for (std::size_t step = 0; step < t; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      next[i].setZero();
      for (std::size_t j : support[i]) next[i] += w.W(i, j) * cur[j];
    }
    std::swap(cur, next);
  }

  ConsensusResult out{std::move(cur), t, std::nullopt};
  if (oracle) {
    const Vector mean = detail::node_mean(values);
    double worst = 0.0;
    for (const auto& e : out.estimates) worst = std::max(worst, (e - mean).norm());
    out.max_deviation = worst;
  }
  return out;
}

/// Rounds are counted from 1; r = 0 and r = 1 both give t_min.
inline std::size_t steps_for_round(const ConsensusSchedule& s, std::size_t r) {
  const double inv_log_rho = 1.0 / std::log(1.0 / s.rho);
  const double lr = std::log(static_cast<double>(std::max<std::size_t>(r, 1)));
  const double raw = (1.0 + s.zeta) * inv_log_rho * lr + std::log(s.c) * inv_log_rho;
  const double steps = std::ceil(raw);
  if (!(steps > static_cast<double>(s.t_min))) return s.t_min;
  return static_cast<std::size_t>(steps);
}

/// Upper bound c * rho^t * spread on any node's distance to the mean after t
/// steps, where spread is the norm of the stacked deviations from the mean.
inline double deviation_bound(const ConsensusSchedule& s, std::size_t t, double spread) {
  if (spread == 0.0) return 0.0;
  return s.c * std::pow(s.rho, static_cast<double>(t)) * spread;
}

/// Norm of the stacked deviations of node values from their mean.
inline double stacked_spread(const NodeVectors& values) {
  detail::common_dimension(values);
  const Vector mean = detail::node_mean(values);
  double sq = 0.0;
  for (const auto& v : values) sq += (v - mean).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace dadmm

#endif  // DADMM_CONSENSUS_HPP
