#include <gtest/gtest.h>

#include <cmath>

#include "calib/error.hpp"
#include "calib/lp.hpp"
#include "calib/rng.hpp"
#include "support/oracles.hpp"

namespace calib {
namespace {

struct DenseLp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b, c;

  LpProblem to_problem() const {
    LpProblem lp;
    for (int i = 0; i < b.size(); ++i) lp.add_row(b(i));
    for (int j = 0; j < c.size(); ++j) {
      std::vector<std::pair<int, double>> col;
      for (int i = 0; i < A.rows(); ++i) {
        if (A(i, j) != 0.0) col.emplace_back(i, A(i, j));
      }
      lp.add_column(c(j), col);
    }
    return lp;
  }
};

// Feasible by construction (b = A x0 with x0 >= 0) and bounded by the last
// row sum(x) + s = 10.
DenseLp random_bounded_lp(SplitMix64& rng) {
  int n = 2 + static_cast<int>(rng.below(4));
  int m = 1 + static_cast<int>(rng.below(3));
  DenseLp lp;
  lp.A = Eigen::MatrixXd::Zero(m + 1, n + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lp.A(i, j) = std::round(rng.uniform(-4.0, 4.0));
  }
  for (int j = 0; j <= n; ++j) lp.A(m, j) = 1.0;
  Eigen::VectorXd x0(n + 1);
  for (int j = 0; j < n; ++j) x0(j) = rng.bernoulli(0.4) ? 0.0 : rng.uniform(0.0, 2.0);
  x0(n) = 10.0 - x0.head(n).sum();
  lp.b = lp.A * x0;
  lp.c = Eigen::VectorXd(n + 1);
  for (int j = 0; j < n; ++j) lp.c(j) = std::round(rng.uniform(-5.0, 5.0));
  lp.c(n) = 0.0;
  return lp;
}

bool full_row_rank(const Eigen::MatrixXd& A) {
  return Eigen::FullPivLU<Eigen::MatrixXd>(A).rank() == A.rows();
}

TEST(Lp, MatchesVertexEnumeration) {
  SplitMix64 rng(101);
  int checked = 0;
  while (checked < 200) {
    DenseLp d = random_bounded_lp(rng);
    if (!full_row_rank(d.A)) continue;
    auto expected = oracle::lp_by_vertices(d.A, d.b, d.c);
    ASSERT_TRUE(expected.has_value());
    LpSolution sol = solve_lp(d.to_problem());
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, *expected, 1e-7);
    Eigen::Map<const Eigen::VectorXd> x(sol.x.data(), static_cast<Eigen::Index>(sol.x.size()));
    EXPECT_LT((d.A * x - d.b).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_GT(x.minCoeff(), -1e-9);
    ++checked;
  }
}

TEST(Lp, DualsCertifyOptimality) {
  SplitMix64 rng(102);
  int checked = 0;
  while (checked < 100) {
    DenseLp d = random_bounded_lp(rng);
    if (!full_row_rank(d.A)) continue;
    LpSolution sol = solve_lp(d.to_problem());
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    Eigen::Map<const Eigen::VectorXd> y(sol.duals.data(), static_cast<Eigen::Index>(sol.duals.size()));
    EXPECT_NEAR(d.b.dot(y), sol.objective, 1e-7);
    Eigen::VectorXd reduced = d.c - d.A.transpose() * y;
    EXPECT_GT(reduced.minCoeff(), -1e-7);
    ++checked;
  }
}

TEST(Lp, DetectsInfeasible) {
  LpProblem lp;
  int r = lp.add_row(-1.0);
  lp.add_column(1.0, {{r, 1.0}});
  lp.add_column(1.0, {{r, 1.0}});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(Lp, DetectsUnbounded) {
  // min -x s.t. x - y = 0
  LpProblem lp;
  int r = lp.add_row(0.0);
  lp.add_column(-1.0, {{r, 1.0}});
  lp.add_column(0.0, {{r, -1.0}});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST(Lp, HandlesBounds) {
  // min x - y s.t. x + y = 1, x in [-2, 3], y free-below, y <= 0.5
  LpProblem lp;
  int r = lp.add_row(1.0);
  lp.add_column(1.0, {{r, 1.0}}, -2.0, 3.0);
  lp.add_column(-1.0, {{r, 1.0}}, -kInfinity, 0.5);
  LpSolution sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.x[0], 0.5, 1e-9);
  EXPECT_NEAR(sol.x[1], 0.5, 1e-9);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
}

TEST(Lp, FreeVariable) {
  // z free: min 2z s.t. z + s = 1, s in [0, 4]
  LpProblem lp;
  int r = lp.add_row(1.0);
  lp.add_column(2.0, {{r, 1.0}}, -kInfinity, kInfinity);
  lp.add_column(0.0, {{r, 1.0}}, 0.0, 4.0);
  LpSolution sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.x[0], -3.0, 1e-9);
  EXPECT_NEAR(sol.objective, -6.0, 1e-9);
}

TEST(Lp, DegenerateAssignmentTerminates) {
  // 7x7 assignment with identical costs: every basis is optimal and most pivots are degenerate.
  const int n = 7;
  LpProblem lp;
  for (int i = 0; i < 2 * n; ++i) lp.add_row(1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lp.add_column(1.0, {{i, 1.0}, {n + j, 1.0}});
  }
  LpSolution sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective, n, 1e-9);
}

TEST(Lp, RedundantRowsAreTolerated) {
  LpProblem lp;
  int r0 = lp.add_row(1.0);
  int r1 = lp.add_row(2.0);
  lp.add_column(1.0, {{r0, 1.0}, {r1, 2.0}});
  lp.add_column(3.0, {{r0, 1.0}, {r1, 2.0}});
  LpSolution sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
}

TEST(Lp, IterationCapThrows) {
  SplitMix64 rng(5);
  DenseLp d = random_bounded_lp(rng);
  while (!full_row_rank(d.A)) d = random_bounded_lp(rng);
  LpOptions opts;
  opts.max_iterations = 0;
  try {
    solve_lp(d.to_problem(), opts);
    FAIL() << "expected NumericalFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericalFailure);
  }
}

}  // namespace
}  // namespace calib
