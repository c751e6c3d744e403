#include "dadmm/admm.hpp"
#include "dadmm/metrics.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"

namespace dadmm {
namespace {

ProblemSpec half_norm_problem(std::size_t n, Eigen::Index p) {
  std::vector<SmoothLocal> locals;
  for (std::size_t i = 0; i < n; ++i)
    locals.push_back(SmoothLocal::quadratic(0.5 * Matrix::Identity(p, p), Vector::Zero(p), 0.0));
  ProblemSpec prob;
  prob.locals = std::move(locals);
  return prob;
}

AgentStates make_states(const std::vector<Vector>& xs) {
  AgentStates s(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s[i].x = xs[i];
    s[i].lambda = Vector::Zero(xs[i].size());
    s[i].x0 = xs[i];
  }
  return s;
}

TEST(AugmentedLagrangian, ZeroStateIsZero) {
  const auto prob = half_norm_problem(3, 2);
  EXPECT_EQ(augmented_lagrangian(make_states(std::vector<Vector>(3, Vector::Zero(2))), prob, 1.0),
            0.0);
}

TEST(AugmentedLagrangian, FeasibleStateDropsCouplingTerms) {
  const auto prob = make_sparse_pca(3, 4, 2, 0.6, 0.5, 1);
  std::mt19937_64 rng(1);
  AgentStates s(3);
  double expected = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    s[i].x = 0.4 * oracle::random_vector(rng, 4).normalized();
    s[i].x0 = s[i].x;
    s[i].lambda = oracle::random_vector(rng, 4, 10.0);
    expected += prob.locals[i].value(s[i].x) + 0.6 * s[i].x0.lpNorm<1>() / 3.0;
  }
  EXPECT_NEAR(augmented_lagrangian(s, prob, 7.0), expected, 1e-14);
}

TEST(AugmentedLagrangian, MatchesTermByTermEvaluation) {
  // n = 2, p = 2, f_i(x) = -||P_i x||^2, g = lambda ||x||_1 on the unit ball
  Matrix P1(2, 2), P2(2, 2);
  P1 << 1.0, 0.5, -0.2, 0.3;
  P2 << 0.4, -1.0, 0.7, 0.1;
  const auto prob = sparse_pca_from_blocks({P1, P2}, 0.8);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    AgentStates s(2);
    for (auto& a : s) {
      a.x = oracle::random_vector(rng, 2, 0.3);
      a.lambda = oracle::random_vector(rng, 2, 0.3);
      a.x0 = oracle::random_vector(rng, 2, 0.3);
    }
    if (s[0].x0.norm() > 1 || s[1].x0.norm() > 1) continue;
    const double beta = 3.5;
    double expected = 0.0;
    const Matrix* P[2] = {&P1, &P2};
    for (int i = 0; i < 2; ++i) {
      const double fx = -(*P[i] * s[i].x).squaredNorm();
      const double d0 = s[i].x[0] - s[i].x0[0], d1 = s[i].x[1] - s[i].x0[1];
      const double inner = s[i].lambda[0] * d0 + s[i].lambda[1] * d1;
      const double quad = 0.5 * beta * (d0 * d0 + d1 * d1);
      const double g = 0.8 * (std::abs(s[i].x0[0]) + std::abs(s[i].x0[1]));
      expected += fx + inner + quad + g / 2.0;
    }
    EXPECT_NEAR(augmented_lagrangian(s, prob, beta), expected, 1e-13);
  }
}

TEST(AugmentedLagrangian, InfeasibleAnchorIsInfinite) {
  const auto prob = make_sparse_pca(2, 3, 2, 1.0, 0.5, 1);
  auto s = make_states({Vector::Zero(3), Vector::Zero(3)});
  s[1].x0 = Vector::Constant(3, 1.0);
  EXPECT_EQ(augmented_lagrangian(s, prob, 5.0), std::numeric_limits<double>::infinity());
}

TEST(ProxGradientGap, StationaryPointsHaveZeroGap) {
  const auto prob = make_sparse_pca(2, 5, 3, 100.0, 0.1, 2);
  // lambda large enough that 0 is stationary: soft-threshold kills everything
  EXPECT_EQ(prox_gradient_gap(make_states({Vector::Zero(5), Vector::Zero(5)}), prob), 0.0);
}

TEST(ProxGradientGap, ZeroRegularizerIsGradientNorm) {
  const auto prob = make_quadratic_consensus(3, 4, 5);
  std::mt19937_64 rng(3);
  const auto s = make_states({oracle::random_vector(rng, 4), oracle::random_vector(rng, 4),
                              oracle::random_vector(rng, 4)});
  const Vector xbar = (s[0].x + s[1].x + s[2].x) / 3.0;
  Vector grad = Vector::Zero(4);
  for (const auto& f : prob.locals) grad += f.gradient(xbar);
  EXPECT_NEAR(prox_gradient_gap(s, prob), grad.norm(), 1e-13);
}

TEST(ProxGradientGap, QuadraticConsensusOptimum) {
  const auto prob = make_quadratic_consensus(6, 3, 9);
  Vector mean = Vector::Zero(3);
  for (const auto& a : consensus_targets(prob)) mean += a / 6.0;
  EXPECT_LT(prox_gradient_gap(make_states(std::vector<Vector>(6, mean)), prob), 1e-10);
}

TEST(DisagreementGap, Examples) {
  EXPECT_EQ(disagreement_gap(make_states(std::vector<Vector>(4, Vector::Ones(3)))), 0.0);
  EXPECT_DOUBLE_EQ(disagreement_gap(make_states({Vector::Zero(1), Vector::Constant(1, 2.0)})), 1.0);
}

TEST(Metrics, AgreeWithBruteForceRecomputation) {
  const auto prob = make_sparse_pca(3, 6, 4, 1.0, 0.3, 7);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = make_states({oracle::random_vector(rng, 6), oracle::random_vector(rng, 6),
                                oracle::random_vector(rng, 6)});
    Vector xbar(6);
    for (Eigen::Index k = 0; k < 6; ++k) xbar[k] = (s[0].x[k] + s[1].x[k] + s[2].x[k]) / 3.0;
    double D = 0;
    for (const auto& a : s) {
      double sq = 0;
      for (Eigen::Index k = 0; k < 6; ++k) sq += (a.x[k] - xbar[k]) * (a.x[k] - xbar[k]);
      D = std::max(D, std::sqrt(sq));
    }
    Vector grad = Vector::Zero(6);
    for (std::size_t i = 0; i < 3; ++i) {
      const Matrix& P = prob.info.blocks[i];
      grad -= 2.0 * P.transpose() * (P * xbar);
    }
    const Vector fresh = prox_l1_ball(xbar - grad, 1.0, 1.0, 1.0);
    EXPECT_NEAR(disagreement_gap(s), D, 1e-12);
    EXPECT_NEAR(prox_gradient_gap(s, prob), (xbar - fresh).norm(), 1e-12);
  }
}

TEST(Metrics, LagrangianBoundedBelowAlongCentralizedRun) {
  const auto prob = make_sparse_pca(5, 20, 10, 1.0, 0.1, 3);
  RunConfig cfg;
  cfg.beta = prob.default_beta();
  cfg.mode = Mode::Centralized;
  cfg.init = InitMode::Random;
  cfg.seed = 4;
  cfg.max_rounds = 200;
  const double n = 5.0;
  std::size_t checked = 0;
  run(prob, cfg, complete_averaging(5), [&](const AgentStates& s, const MetricsRecord& rec) {
    double bound = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      bound += prob.locals[i].value(s[i].x0) + prob.regularizer.value(s[i].x0) / n;
    EXPECT_GE(rec.L, bound - 1e-10) << "round " << rec.r;
    ++checked;
  });
  EXPECT_GT(checked, 10u);
}

TEST(Metrics, ScheduleCommunicationIsOrderRLogR) {
  const auto w = metropolis_hastings_weights(build_ring(20));
  const auto s = ConsensusSchedule::from_weights(w, 0.5);
  const double inv = 1.0 / std::log(1.0 / s.rho);
  const double C = (1.0 + s.zeta) * inv +
                   (1.0 + static_cast<double>(s.t_min) + std::max(0.0, std::log(s.c) * inv)) /
                       std::log(2.0);
  std::size_t comm = 0;
  for (std::size_t R = 1; R <= 10000; ++R) {
    comm += steps_for_round(s, R);
    const double Rd = static_cast<double>(R);
    ASSERT_LE(static_cast<double>(comm), C * Rd * std::log(Rd + 2.0)) << "R=" << R;
  }
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<MetricsRecord> recs;
  std::size_t comm = 0;
  for (std::size_t r = 1; r <= 25; ++r) {
    comm += r % 4;
    recs.push_back({r, u(rng), std::abs(u(rng)) * 1e-9, std::abs(u(rng)), 1.0 / 3.0,
                    std::abs(u(rng)), 0.0, r % 4, comm});
  }
  recs[3].L = std::numeric_limits<double>::infinity();
  std::stringstream ss;
  write_csv(ss, recs);
  EXPECT_NE(ss.str().find(",inf,"), std::string::npos);
  const auto back = read_csv(ss, "mem");
  EXPECT_EQ(back, recs);
}

TEST(Csv, EmptyRecordListIsHeaderOnly) {
  std::stringstream ss;
  write_csv(ss, {});
  EXPECT_EQ(ss.str(), std::string(kCsvHeader) + "\n");
  EXPECT_TRUE(read_csv(ss, "mem").empty());
}

TEST(Csv, ErrorsCarryPathContext) {
  std::istringstream wrong("r,L,G\n1,2,3\n");
  try {
    read_csv(wrong, "runs/a.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("runs/a.csv"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column mismatch"), std::string::npos);
  }
  std::istringstream bad(std::string(kCsvHeader) + "\n1,x,0,0,0,0,0,1,1\n");
  EXPECT_THROW(read_csv(bad, "b.csv"), IoError);
  EXPECT_THROW(read_csv("/nonexistent/m.csv"), IoError);
  EXPECT_THROW(write_csv({}, "/nonexistent/dir/m.csv"), IoError);
}

TEST(Csv, FileRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "dadmm_metrics_test.csv").string();
  const std::vector<MetricsRecord> recs{{1, -2.5, 0.1, 0.2, 0.3, 0.4, 0.5, 3, 3}};
  write_csv(recs, path);
  EXPECT_EQ(read_csv(path), recs);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace dadmm
