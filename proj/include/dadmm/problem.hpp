#ifndef DADMM_PROBLEM_HPP
#define DADMM_PROBLEM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dadmm/errors.hpp"
#include "dadmm/prox.hpp"

namespace dadmm {

using Matrix = Eigen::MatrixXd;

/// f(x) = x^T A x + b^T x + c with A symmetric.
struct QuadraticForm {
  Matrix A;
  Vector b;
  double c = 0.0;
};

/// Smooth local term f_i with an L-Lipschitz gradient.
class SmoothLocal {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  static SmoothLocal from_oracles(std::size_t p, ValueFn value, GradientFn gradient,
                                  double lipschitz) {
    if (!(lipschitz > 0.0)) throw std::invalid_argument("Lipschitz constant must be > 0");
    SmoothLocal s;
    s.p_ = p;
    s.value_ = std::move(value);
    s.gradient_ = std::move(gradient);
    s.lipschitz_ = lipschitz;
    return s;
  }

  /// L = 2 * max |eig(A)|, the Lipschitz constant of x -> 2Ax + b.
  static SmoothLocal quadratic(Matrix A, Vector b, double c) {
    if (A.rows() != A.cols() || A.rows() != b.size())
      throw ShapeError("quadratic form: A must be p x p and b of length p");
    SmoothLocal s;
    s.p_ = static_cast<std::size_t>(A.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    s.lipschitz_ = 2.0 * es.eigenvalues().cwiseAbs().maxCoeff();
    s.quad_ = QuadraticForm{std::move(A), std::move(b), c};
    return s;
  }

  std::size_t dimension() const noexcept { return p_; }
  double lipschitz() const noexcept { return lipschitz_; }
  const std::optional<QuadraticForm>& quadratic_form() const noexcept { return quad_; }

  double value(const Vector& x) const {
    if (quad_) return x.dot(quad_->A * x) + quad_->b.dot(x) + quad_->c;
    return value_(x);
  }

  Vector gradient(const Vector& x) const {
    if (quad_) return 2.0 * (quad_->A * x) + quad_->b;
    return gradient_(x);
  }

 private:
  SmoothLocal() = default;

  std::size_t p_ = 0;
  double lipschitz_ = 0.0;
  std::optional<QuadraticForm> quad_;
  ValueFn value_;
  GradientFn gradient_;
};

enum class InstanceKind { SparsePca, QuadraticConsensus, Custom };

inline std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::SparsePca: return "sparse_pca";
    case InstanceKind::QuadraticConsensus: return "quadratic_consensus";
    case InstanceKind::Custom: return "custom";
  }
  return "custom";
}

/// Generator parameters and raw data kept alongside the oracles so an
/// instance can be written out and rebuilt.
struct InstanceInfo {
  InstanceKind kind = InstanceKind::Custom;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t m = 0;
  double lambda = 0.0;
  double sigma = 0.0;
  double radius = 1.0;
  std::uint64_t seed = 0;
  /// P_i (m x p) for sparse PCA, a_i^T (1 x p) for quadratic consensus.
  std::vector<Matrix> blocks;
};

/// min_x sum_i f_i(x) + g(x).
struct ProblemSpec {
  std::vector<SmoothLocal> locals;
  ConvexRegularizer regularizer = zero_regularizer();
  InstanceInfo info;

  std::size_t agents() const noexcept { return locals.size(); }
  std::size_t dimension() const { return locals.empty() ? 0 : locals.front().dimension(); }

  double lipschitz_max() const {
    double L = 0.0;
    for (const auto& f : locals) L = std::max(L, f.lipschitz());
    return L;
  }

  /// beta = margin * L_max. The default 2.05 keeps (beta - L)/2 - L^2/beta > 0
  /// (beta > 2L) with a 2.5% cushion; on sparse PCA that is
  /// beta = 4.1 max lambda_max(P_i^T P_i). Penalties just above L make the
  /// local solves nearly singular and the iteration blows up.
  double default_beta(double margin = 2.05) const { return margin * lipschitz_max(); }

  void validate() const {
    if (locals.empty()) throw ShapeError("problem has no agents");
    const auto p = locals.front().dimension();
    for (std::size_t i = 1; i < locals.size(); ++i) {
      if (locals[i].dimension() != p)
        throw ShapeError("agent " + std::to_string(i) + " has dimension " +
                         std::to_string(locals[i].dimension()) + ", expected " +
                         std::to_string(p));
    }
  }
};

// ---------------------------------------------------------------------------
// Local subproblem: argmin_x f_i(x) + <x, lambda_i> + (beta/2) ||x - x0||^2
// ---------------------------------------------------------------------------

enum class SubproblemMethod { Auto, Iterative };

inline constexpr double kSubproblemTolerance = 1e-9;

inline double stationarity_residual(const SmoothLocal& local, const Vector& x,
                                    const Vector& lambda, const Vector& x0, double beta) {
  return (local.gradient(x) + lambda + beta * (x - x0)).norm();
}

/// Solver for one agent's primal update at fixed beta. Quadratic locals reuse a
/// Cholesky factor of (beta I + 2A); other locals run accelerated gradient
/// descent with step 1/(beta + L) until the stationarity residual is at most
/// tol * (1 + ||x||).
class SubproblemSolver {
 public:
  SubproblemSolver(const SmoothLocal& local, double beta,
                   SubproblemMethod method = SubproblemMethod::Auto,
                   double tolerance = kSubproblemTolerance)
      : local_(&local), beta_(beta), tol_(tolerance) {
    if (!(beta > local.lipschitz())) {
      throw SubproblemError("beta = " + std::to_string(beta) +
                            " does not exceed the Lipschitz constant L = " +
                            std::to_string(local.lipschitz()) +
                            "; local subproblem is not strongly convex");
    }
    if (method == SubproblemMethod::Auto && local.quadratic_form()) {
      const auto& q = *local.quadratic_form();
      const auto p = static_cast<Eigen::Index>(local.dimension());
      hessian_ = beta * Matrix::Identity(p, p) + 2.0 * q.A;
      llt_.compute(hessian_);
      if (llt_.info() != Eigen::Success)
        throw SubproblemError("factorization of (beta I + 2A) failed: matrix is singular");
      direct_ = true;
    }
  }

  double beta() const noexcept { return beta_; }

  Vector solve(const Vector& lambda, const Vector& x0) const {
    const auto p = static_cast<Eigen::Index>(local_->dimension());
    if (lambda.size() != p || x0.size() != p)
      throw ShapeError("subproblem inputs must have length " + std::to_string(p));
    return direct_ ? solve_direct(lambda, x0) : solve_iterative(lambda, x0);
  }

 private:
  Vector solve_direct(const Vector& lambda, const Vector& x0) const {
    const Vector rhs = beta_ * x0 - lambda - local_->quadratic_form()->b;
    Vector x = llt_.solve(rhs);
    // one refinement step tightens the residual on ill-scaled blocks
    x += llt_.solve(rhs - hessian_ * x);
    return x;
  }

  Vector solve_iterative(const Vector& lambda, const Vector& x0) const {
    const double L = local_->lipschitz();
    const double step = 1.0 / (beta_ + L);
    const double q = (beta_ - L) / (beta_ + L);
    const double momentum = (1.0 - std::sqrt(q)) / (1.0 + std::sqrt(q));
    // explicit return type: an Eigen expression here would reference a dead temporary
    auto grad = [&](const Vector& z) -> Vector {
      return local_->gradient(z) + lambda + beta_ * (z - x0);
    };

    Vector x = x0;
    Vector prev = x0;
    constexpr int kMaxIterations = 200000;
    for (int it = 0; it < kMaxIterations; ++it) {
      const Vector g = grad(x);
      if (g.norm() <= tol_ * (1.0 + x.norm())) return x;
      const Vector y = x + momentum * (x - prev);
      prev = x;
      x = y - step * grad(y);
      if (!x.allFinite()) break;
    }
    throw SubproblemError("iterative subproblem solver did not reach the residual tolerance");
  }

  const SmoothLocal* local_;
  double beta_;
  double tol_;
  bool direct_ = false;
  Matrix hessian_;
  Eigen::LLT<Matrix> llt_;
};

inline Vector solve_local_subproblem(const SmoothLocal& local, const Vector& lambda,
                                     const Vector& x0, double beta,
                                     SubproblemMethod method = SubproblemMethod::Auto) {
  return SubproblemSolver(local, beta, method).solve(lambda, x0);
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// f_i(x) = -||P_i x||^2 and g = lambda ||x||_1 + indicator{||x|| <= radius}.
inline ProblemSpec sparse_pca_from_blocks(std::vector<Matrix> blocks, double lambda,
                                          double radius = 1.0) {
  if (blocks.empty()) throw ShapeError("sparse PCA needs at least one agent");
  const auto p = blocks.front().cols();
  ProblemSpec prob;
  prob.locals.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].cols() != p)
      throw ShapeError("P_" + std::to_string(i) + " has " + std::to_string(blocks[i].cols()) +
                       " columns, expected " + std::to_string(p));
    Matrix A = -(blocks[i].transpose() * blocks[i]);
    prob.locals.push_back(SmoothLocal::quadratic(std::move(A), Vector::Zero(p), 0.0));
  }
  prob.regularizer = l1_ball_regularizer(lambda, radius);
  prob.info.kind = InstanceKind::SparsePca;
  prob.info.n = blocks.size();
  prob.info.p = static_cast<std::size_t>(p);
  prob.info.m = static_cast<std::size_t>(blocks.front().rows());
  prob.info.lambda = lambda;
  prob.info.radius = radius;
  prob.info.blocks = std::move(blocks);
  return prob;
}

/// Entries of each P_i drawn i.i.d. from N(0, sigma^2), agent by agent in
/// row-major order from a single mt19937_64 stream.
inline ProblemSpec make_sparse_pca(std::size_t n, std::size_t p, std::size_t m, double lambda,
                                   double sigma, std::uint64_t seed, double radius = 1.0) {
  if (n < 1 || p < 1 || m < 1) throw ShapeError("sparse PCA sizes must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<Matrix> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix P(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
    for (Eigen::Index r = 0; r < P.rows(); ++r)
      for (Eigen::Index c = 0; c < P.cols(); ++c) P(r, c) = normal(rng);
    blocks.push_back(std::move(P));
  }
  auto prob = sparse_pca_from_blocks(std::move(blocks), lambda, radius);
  prob.info.sigma = sigma;
  prob.info.seed = seed;
  return prob;
}

/// f_i(x) = 0.5 ||x - a_i||^2, g = 0. The minimizer is mean(a_i).
inline ProblemSpec quadratic_consensus_from_targets(const std::vector<Vector>& targets) {
  if (targets.empty()) throw ShapeError("quadratic consensus needs at least one agent");
  const auto p = targets.front().size();
  ProblemSpec prob;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Vector& a = targets[i];
    if (a.size() != p) throw ShapeError("target " + std::to_string(i) + " has wrong length");
    prob.locals.push_back(
        SmoothLocal::quadratic(0.5 * Matrix::Identity(p, p), -a, 0.5 * a.squaredNorm()));
    prob.info.blocks.push_back(a.transpose());
  }
  prob.regularizer = zero_regularizer();
  prob.info.kind = InstanceKind::QuadraticConsensus;
  prob.info.n = targets.size();
  prob.info.p = static_cast<std::size_t>(p);
  prob.info.m = 1;
  return prob;
}

inline ProblemSpec make_quadratic_consensus(std::size_t n, std::size_t p, std::uint64_t seed) {
  if (n < 1 || p < 1) throw ShapeError("quadratic consensus sizes must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> targets(n, Vector(static_cast<Eigen::Index>(p)));
  for (auto& a : targets)
    for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = normal(rng);
  auto prob = quadratic_consensus_from_targets(targets);
  prob.info.seed = seed;
  prob.info.sigma = 1.0;
  return prob;
}

/// Rows of info.blocks as vectors; the targets a_i of a quadratic-consensus instance.
inline std::vector<Vector> consensus_targets(const ProblemSpec& prob) {
  if (prob.info.kind != InstanceKind::QuadraticConsensus)
    throw ShapeError("instance is not a quadratic-consensus problem");
  std::vector<Vector> out;
  for (const auto& b : prob.info.blocks) out.emplace_back(b.row(0).transpose());
  return out;
}

}  // namespace dadmm

#endif  // DADMM_PROBLEM_HPP
