#ifndef DADMM_STATE_HPP
#define DADMM_STATE_HPP

#include <Eigen/Dense>

#include <vector>

namespace dadmm {

using Vector = Eigen::VectorXd;

/// One agent's iterate. xtilde / lambdatilde are the agent's most recent
/// consensus estimates of the network means of x and lambda, y0 the prox
/// input formed from them (xtilde + lambdatilde / beta).
struct AgentState {
  Vector x;
  Vector lambda;
  Vector x0;
  Vector xtilde;
  Vector lambdatilde;
  Vector y0;
};

using AgentStates = std::vector<AgentState>;

inline Vector mean_x(const AgentStates& states) {
  Vector m = Vector::Zero(states.front().x.size());
  for (const auto& s : states) m += s.x;
  return m / static_cast<double>(states.size());
}

}  // namespace dadmm

#endif  // DADMM_STATE_HPP
