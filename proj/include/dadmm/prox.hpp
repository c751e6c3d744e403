#ifndef DADMM_PROX_HPP
#define DADMM_PROX_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "dadmm/errors.hpp"

namespace dadmm {

using Vector = Eigen::VectorXd;

/// sign(x_k) * max(|x_k| - tau, 0), componentwise.
inline Vector soft_threshold(const Vector& x, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
  Vector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double mag = std::abs(x[k]) - tau;
    out[k] = mag > 0.0 ? std::copysign(mag, x[k]) : 0.0;
  }
  return out;
}

inline Vector project_l2_ball(const Vector& x, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_l2_ball: radius must be > 0");
  const double norm = x.norm();
  if (norm <= radius) return x;
  return x * (radius / norm);
}

/// Prox of gamma * (lambda ||.||_1 + indicator{||u|| <= radius}).
/// Thresholding then radial projection is exact: the ball multiplier only
/// rescales the thresholded point.
inline Vector prox_l1_ball(const Vector& y, double gamma, double lambda, double radius) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_l1_ball: gamma must be > 0");
  return project_l2_ball(soft_threshold(y, gamma * lambda), radius);
}

/// Closed convex g with value (possibly +inf off its domain) and prox
/// prox(gamma, y) = argmin_u g(u) + ||u - y||^2 / (2 gamma).
class ConvexRegularizer {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using ProxFn = std::function<Vector(double, const Vector&)>;

  ConvexRegularizer(std::string name, ValueFn value, ProxFn prox)
      : name_(std::move(name)), value_(std::move(value)), prox_(std::move(prox)) {}

  const std::string& name() const noexcept { return name_; }
  double value(const Vector& x) const { return value_(x); }
  Vector prox(double gamma, const Vector& y) const { return prox_(gamma, y); }
  bool feasible(const Vector& x) const { return std::isfinite(value_(x)); }

 private:
  std::string name_;
  ValueFn value_;
  ProxFn prox_;
};

namespace detail {
// Projection output can overshoot the radius by a few ulps.
inline bool inside_ball(const Vector& x, double radius) {
  return x.norm() <= radius * (1.0 + 1e-12);
}
}  // namespace detail

inline ConvexRegularizer zero_regularizer() {
  return ConvexRegularizer(
      "zero", [](const Vector&) { return 0.0; }, [](double, const Vector& y) { return y; });
}

inline ConvexRegularizer l1_regularizer(double lambda) {
  return ConvexRegularizer(
      "l1", [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); },
      [lambda](double gamma, const Vector& y) { return soft_threshold(y, gamma * lambda); });
}

inline ConvexRegularizer l2_ball_indicator(double radius) {
  return ConvexRegularizer(
      "l2_ball",
      [radius](const Vector& x) {
        return detail::inside_ball(x, radius) ? 0.0 : std::numeric_limits<double>::infinity();
      },
      [radius](double, const Vector& y) { return project_l2_ball(y, radius); });
}

/// lambda ||x||_1 + indicator{||x|| <= radius}.
inline ConvexRegularizer l1_ball_regularizer(double lambda, double radius) {
  return ConvexRegularizer(
      "l1_ball",
      [lambda, radius](const Vector& x) {
        return detail::inside_ball(x, radius) ? lambda * x.lpNorm<1>()
                                              : std::numeric_limits<double>::infinity();
      },
      [lambda, radius](double gamma, const Vector& y) {
        return prox_l1_ball(y, gamma, lambda, radius);
      });
}

}  // namespace dadmm

#endif  // DADMM_PROX_HPP
