// Independent reference computations used only by the test suites. Nothing
// here calls into the code paths it is used to check.

#ifndef DADMM_TESTS_ORACLES_HPP
#define DADMM_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Golden-section search for the minimizer of a convex 1-D function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iters && b - a > 1e-15 * (1.0 + std::abs(a)); ++k) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - phi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + phi * (b - a), fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// argmin_u lambda |u| + (1/(2 gamma)) (u - y)^2 + (mu/2) u^2 by direct search.
inline double scalar_prox_search(double y, double gamma, double lambda, double mu) {
  auto f = [&](double u) {
    return lambda * std::abs(u) + (u - y) * (u - y) / (2.0 * gamma) + 0.5 * mu * u * u;
  };
  const double span = std::abs(y) + 1.0;
  return golden_min(f, -span, span);
}

/// argmin_{||u|| <= radius} lambda ||u||_1 + ||u - y||^2 / (2 gamma), computed
/// by bisection on the ball multiplier mu with per-coordinate numeric
/// minimization of the relaxed separable objective.
inline VectorXd l1_ball_prox_numeric(const VectorXd& y, double gamma, double lambda,
                                     double radius) {
  auto solve = [&](double mu) {
    VectorXd u(y.size());
    for (Eigen::Index k = 0; k < y.size(); ++k) u[k] = scalar_prox_search(y[k], gamma, lambda, mu);
    return u;
  };
  VectorXd u = solve(0.0);
  if (u.norm() <= radius) return u;
  double lo = 0.0, hi = 1.0;
  while (solve(hi).norm() > radius) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (solve(mid).norm() > radius ? lo : hi) = mid;
  }
  return solve(hi);
}

/// ||W^m - (1/n) 11^T||_2 from explicit matrix powers and an SVD.
inline std::vector<double> consensus_gap_norms(const MatrixXd& W, int max_power) {
  const auto n = W.rows();
  const MatrixXd J = MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  std::vector<double> out;
  MatrixXd P = MatrixXd::Identity(n, n);
  for (int m = 1; m <= max_power; ++m) {
    P = P * W;
    Eigen::JacobiSVD<MatrixXd> svd(P - J);
    out.push_back(svd.singularValues()(0));
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::size_t components() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) c += find(i) == i;
    return c;
  }
};

/// Central differences of f at x with step h.
inline VectorXd finite_difference_gradient(const std::function<double(const VectorXd&)>& f,
                                           const VectorXd& x, double h = 1e-5) {
  VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline VectorXd random_vector(std::mt19937_64& rng, Eigen::Index p, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorXd v(p);
  for (Eigen::Index k = 0; k < p; ++k) v[k] = normal(rng);
  return v;
}

}  // namespace oracle

#endif  // DADMM_TESTS_ORACLES_HPP
