#ifndef DADMM_GRAPH_HPP
#define DADMM_GRAPH_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dadmm/errors.hpp"

namespace dadmm {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected connected graph without self-loops. Edges are stored once,
/// normalized to (min, max) and sorted.
class Topology {
 public:
  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_.at(i); }
  std::size_t degree(std::size_t i) const { return adj_.at(i).size(); }

  friend Topology build_from_edge_list(std::size_t n, const std::vector<Edge>& edges);

 private:
  Topology() = default;

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// Deduplicates the edge list, rejects self-loops and out-of-range endpoints,
/// and verifies connectivity by breadth-first traversal from node 0.
inline Topology build_from_edge_list(std::size_t n, const std::vector<Edge>& edges) {
  if (n < 1) throw TopologyError("topology needs at least one node");
  std::vector<Edge> norm;
  norm.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) {
      throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (a == b) throw TopologyError("self-loop on node " + std::to_string(a));
    norm.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());

  Topology t;
  t.n_ = n;
  t.edges_ = std::move(norm);
  t.adj_.assign(n, {});
  for (auto [a, b] : t.edges_) {
    t.adj_[a].push_back(b);
    t.adj_[b].push_back(a);
  }
  for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());

  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  seen[0] = true;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : t.adj_[u]) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw ConnectivityError(i, "graph is disconnected: node " + std::to_string(i) +
                                     " is unreachable from node 0");
    }
  }
  return t;
}

inline Topology build_ring(std::size_t n) {
  if (n < 3) throw TopologyError("ring needs at least 3 nodes, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return build_from_edge_list(n, edges);
}

inline Topology build_complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return build_from_edge_list(n, edges);
}

/// Parses "i j" pairs, one per line, 0-indexed. '#' starts a comment.
inline std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long a = 0, b = 0;
    if (!(ls >> a)) continue;  // blank or comment-only
    std::string rest;
    if (!(ls >> b) || (ls >> rest) || a < 0 || b < 0) {
      throw TopologyError("edge list line " + std::to_string(lineno) +
                          ": expected two non-negative node indices");
    }
    edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  return edges;
}

/// Loads an edge-list file. When n is 0 the node count is one past the
/// largest index seen.
inline Topology load_edge_list(const std::string& path, std::size_t n = 0) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  auto edges = parse_edge_list(in);
  if (n == 0) {
    for (auto [a, b] : edges) n = std::max({n, a + 1, b + 1});
  }
  return build_from_edge_list(n, edges);
}

/// Symmetric doubly stochastic mixing matrix with its consensus-rate
/// constants: ||W^m - (1/n) 11^T|| <= c * rho^m.
struct WeightMatrix {
  Eigen::MatrixXd W;
  double rho = 0.0;
  double c = 1.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(W.rows()); }
};

struct SpectralConstants {
  double rho;
  double c;
};

/// rho is the largest |eigenvalue| of W - (1/n) 11^T, which for symmetric W
/// equals the second-largest singular value. c = 1 for symmetric W.
/// rho == 0 (exact averaging) is floored at machine epsilon.
inline SpectralConstants spectral_constants(const Eigen::MatrixXd& W) {
  const Eigen::Index n = W.rows();
  if (n == 0 || W.cols() != n) throw ShapeError("weight matrix must be square and non-empty");
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ShapeError("weight matrix must be symmetric");
  if (n == 1) return {std::numeric_limits<double>::epsilon(), 1.0};

  const Eigen::MatrixXd centered =
      W - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centered, Eigen::EigenvaluesOnly);
  double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  if (rho >= 1.0 - 1e-12) {
    throw SpectralGapError("spectral contraction factor rho = " + std::to_string(rho) +
                           " is not below 1; graph disconnected or W periodic");
  }
  rho = std::max(rho, std::numeric_limits<double>::epsilon());
  return {rho, 1.0};
}

inline WeightMatrix make_weight_matrix(Eigen::MatrixXd W) {
  auto [rho, c] = spectral_constants(W);
  return WeightMatrix{std::move(W), rho, c};
}

/// W_ij = 1 / (1 + max(deg i, deg j)) on edges, self-weight absorbs the rest.
inline WeightMatrix metropolis_hastings_weights(const Topology& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b] : t.edges()) {
    const double w = 1.0 / (1.0 + static_cast<double>(std::max(t.degree(a), t.degree(b))));
    W(a, b) = w;
    W(b, a) = w;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j : t.neighbors(static_cast<std::size_t>(i))) off += W(i, j);
    W(i, i) = 1.0 - off;
  }
  return make_weight_matrix(std::move(W));
}

/// W = (1/n) 11^T: one step reaches the exact mean.
inline WeightMatrix complete_averaging(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return make_weight_matrix(Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(n)));
}

}  // namespace dadmm

#endif  // DADMM_GRAPH_HPP
