#include <gtest/gtest.h>

#include <cmath>

#include "gridclear/lp.hpp"
#include "test_support.hpp"

namespace gridclear {
namespace {

bool same_lp(const LinearProgram& a, const LinearProgram& b) {
  if (a.direction != b.direction || a.columns.size() != b.columns.size() ||
      a.rows.size() != b.rows.size()) {
    return false;
  }
  for (std::size_t j = 0; j < a.columns.size(); ++j) {
    if (a.columns[j].name != b.columns[j].name || a.columns[j].sign != b.columns[j].sign ||
        a.columns[j].cost != b.columns[j].cost) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].name != b.rows[i].name || a.rows[i].sense != b.rows[i].sense ||
        a.rows[i].rhs != b.rows[i].rhs) {
      return false;
    }
    for (std::size_t j = 0; j < a.columns.size(); ++j) {
      if (a.coefficient(i, j) != b.coefficient(i, j)) return false;
    }
  }
  return true;
}

TEST(BuildDual, OneVariableMinimization) {
  // min x  s.t. x >= 1, x >= 0   ->   max p  s.t. p <= 1, p >= 0
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kNonneg, 1.0);
  lp.add_row("floor", Sense::kGe, {{x, 1.0}}, 1.0);

  const LinearProgram dual = build_dual(lp);
  EXPECT_EQ(dual.direction, Direction::kMaximize);
  ASSERT_EQ(dual.columns.size(), 1u);
  EXPECT_EQ(dual.columns[0].name, "floor");
  EXPECT_EQ(dual.columns[0].sign, Sign::kNonneg);
  EXPECT_EQ(dual.columns[0].cost, 1.0);
  ASSERT_EQ(dual.rows.size(), 1u);
  EXPECT_EQ(dual.rows[0].name, "x");
  EXPECT_EQ(dual.rows[0].sense, Sense::kLe);
  EXPECT_EQ(dual.rows[0].rhs, 1.0);
  EXPECT_EQ(dual.coefficient(0, 0), 1.0);
}

TEST(BuildDual, SignTableForMinimization) {
  LinearProgram lp;
  const auto a = lp.add_column("a", Sign::kNonneg, 1.0);
  const auto b = lp.add_column("b", Sign::kNonpos, 2.0);
  const auto c = lp.add_column("c", Sign::kFree, 3.0);
  lp.add_row("ge", Sense::kGe, {{a, 1.0}, {b, 1.0}}, 1.0);
  lp.add_row("le", Sense::kLe, {{b, 1.0}, {c, 1.0}}, 2.0);
  lp.add_row("eq", Sense::kEq, {{a, 1.0}, {c, 1.0}}, 3.0);

  const LinearProgram dual = build_dual(lp);
  EXPECT_EQ(dual.columns[0].sign, Sign::kNonneg);
  EXPECT_EQ(dual.columns[1].sign, Sign::kNonpos);
  EXPECT_EQ(dual.columns[2].sign, Sign::kFree);
  EXPECT_EQ(dual.rows[0].sense, Sense::kLe);
  EXPECT_EQ(dual.rows[1].sense, Sense::kGe);
  EXPECT_EQ(dual.rows[2].sense, Sense::kEq);
}

TEST(BuildDual, IsAnInvolution) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const LinearProgram lp = testing_support::random_lp(seed);
    EXPECT_TRUE(same_lp(build_dual(build_dual(lp)), lp)) << "seed " << seed;
  }
}

TEST(BuildDual, RejectsMalformedProgramsListingEveryProblem) {
  LinearProgram lp;
  lp.add_column("x", Sign::kNonneg, 1.0);
  lp.add_column("x", Sign::kNonneg, std::nan(""));
  lp.add_row("r", Sense::kGe, {{5, 1.0}}, 1.0);
  lp.add_row("r", Sense::kLe, {{0, 1.0}}, INFINITY);
  try {
    build_dual(lp);
    FAIL() << "expected LpValidationError";
  } catch (const LpValidationError& e) {
    const auto& p = e.problems();
    ASSERT_EQ(p.size(), 5u);
    EXPECT_NE(std::string(e.what()).find("column 'x' (#1) duplicates"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("references column #5"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("row 'r': rhs is not finite"), std::string::npos);
  }
}

TEST(Solve, TrivialMinimization) {
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kNonneg, 1.0);
  lp.add_row("floor", Sense::kGe, {{x, 1.0}}, 1.0);
  const LpSolution s = solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(s.primal[0], 1.0);
  EXPECT_DOUBLE_EQ(s.dual[0], 1.0);
  EXPECT_DOUBLE_EQ(s.objective, 1.0);
  EXPECT_DOUBLE_EQ(s.reduced_cost[0], 0.0);
}

TEST(Solve, TextbookMaximization) {
  // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36, duals (0, 1.5, 1)
  LinearProgram lp;
  lp.direction = Direction::kMaximize;
  const auto x = lp.add_column("x", Sign::kNonneg, 3.0);
  const auto y = lp.add_column("y", Sign::kNonneg, 5.0);
  lp.add_row("plant1", Sense::kLe, {{x, 1.0}}, 4.0);
  lp.add_row("plant2", Sense::kLe, {{y, 2.0}}, 12.0);
  lp.add_row("plant3", Sense::kLe, {{x, 3.0}, {y, 2.0}}, 18.0);
  const LpSolution s = solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[0], 2.0, 1e-12);
  EXPECT_NEAR(s.primal[1], 6.0, 1e-12);
  EXPECT_NEAR(s.objective, 36.0, 1e-12);
  EXPECT_NEAR(s.dual[0], 0.0, 1e-12);
  EXPECT_NEAR(s.dual[1], 1.5, 1e-12);
  EXPECT_NEAR(s.dual[2], 1.0, 1e-12);
}

TEST(Solve, NonposAndFreeColumns) {
  // min -x + 2y  s.t. x - y = 2, y >= -3 ; x free, y <= 0  ->  x = -1, y = -3
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kFree, -1.0);
  const auto y = lp.add_column("y", Sign::kNonpos, 2.0);
  lp.add_row("link", Sense::kEq, {{x, 1.0}, {y, -1.0}}, 2.0);
  lp.add_row("floor", Sense::kGe, {{y, 1.0}}, -3.0);
  lp.add_row("cap", Sense::kLe, {{x, 1.0}}, 100.0);
  const LpSolution s = solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[x], -1.0, 1e-12);
  EXPECT_NEAR(s.primal[y], -3.0, 1e-12);
  EXPECT_NEAR(s.objective, -5.0, 1e-12);
  EXPECT_NEAR(s.dual[0], -1.0, 1e-12);
  EXPECT_NEAR(s.dual[1], 1.0, 1e-12);
  EXPECT_LE(max_violation(lp, s.primal).amount, 1e-9);
  EXPECT_LE(dual_sign_violation(lp, s.dual).amount, 1e-9);
  EXPECT_TRUE(check_strong_duality(lp, s).pass);
}

TEST(Solve, ReportsInfeasibilityWithCertificateRows) {
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kNonneg, 1.0);
  lp.add_row("at_least_two", Sense::kGe, {{x, 1.0}}, 2.0);
  lp.add_row("at_most_one", Sense::kLe, {{x, 1.0}}, 1.0);
  const LpSolution s = solve(lp);
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
  EXPECT_FALSE(s.infeasible_rows.empty());
}

TEST(Solve, ReportsUnboundedRay) {
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kNonneg, -1.0);
  const auto y = lp.add_column("y", Sign::kNonneg, 0.0);
  lp.add_row("r", Sense::kGe, {{x, 1.0}, {y, -1.0}}, 0.0);
  const LpSolution s = solve(lp);
  EXPECT_EQ(s.status, LpStatus::kUnbounded);
  ASSERT_TRUE(s.unbounded_column.has_value());
}

TEST(Solve, BlandTerminatesOnBealeCyclingExample) {
  // Beale's example cycles under Dantzig's rule with naive tie breaking.
  LinearProgram lp;
  const auto x4 = lp.add_column("x4", Sign::kNonneg, -0.75);
  const auto x5 = lp.add_column("x5", Sign::kNonneg, 150.0);
  const auto x6 = lp.add_column("x6", Sign::kNonneg, -0.02);
  const auto x7 = lp.add_column("x7", Sign::kNonneg, 6.0);
  lp.add_row("r1", Sense::kLe, {{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, 0.0);
  lp.add_row("r2", Sense::kLe, {{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, 0.0);
  lp.add_row("r3", Sense::kLe, {{x6, 1.0}}, 1.0);
  const LpSolution s = solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -0.05, 1e-12);
}

TEST(Solve, RedundantEqualityRowsAreTolerated) {
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kNonneg, 1.0);
  const auto y = lp.add_column("y", Sign::kNonneg, 2.0);
  lp.add_row("sum", Sense::kEq, {{x, 1.0}, {y, 1.0}}, 4.0);
  lp.add_row("sum_twice", Sense::kEq, {{x, 2.0}, {y, 2.0}}, 8.0);
  const LpSolution s = solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 4.0, 1e-12);
  EXPECT_TRUE(check_strong_duality(lp, s).pass);
  EXPECT_TRUE(check_complementary_slackness(lp, s).pass);
}

TEST(Solve, RandomProgramsSatisfyOptimalityContracts) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const LinearProgram lp = testing_support::random_lp(seed);
    const LpSolution s = solve(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal) << "seed " << seed;
    EXPECT_LE(max_violation(lp, s.primal).amount, 1e-9) << "seed " << seed;
    EXPECT_LE(dual_sign_violation(lp, s.dual).amount, 1e-9) << "seed " << seed;
    EXPECT_NEAR(s.objective, objective_value(lp, s.primal), 1e-12);
    const auto sd = check_strong_duality(lp, s);
    EXPECT_TRUE(sd.pass) << "seed " << seed << " gap " << sd.gap_abs;
    const auto cs = check_complementary_slackness(lp, s);
    EXPECT_TRUE(cs.pass) << "seed " << seed << " row " << cs.worst_row << " col " << cs.worst_column;
    // Duals are feasible for the built dual program.
    EXPECT_LE(max_violation(build_dual(lp), s.dual).amount, 1e-8) << "seed " << seed;
  }
}

TEST(Solve, WeakDualityOverFeasiblePoints) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::vector<double> x0;
    LinearProgram lp = testing_support::random_lp(seed, &x0);
    lp.direction = Direction::kMinimize;
    const LpSolution s = solve(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);

    // Other dual-feasible points: optimize a boxed copy of the dual under a
    // different objective. The box only shrinks the dual-feasible set.
    LinearProgram dual = build_dual(lp);
    std::mt19937_64 rng(seed);
    const std::size_t dual_columns = dual.columns.size();
    for (std::size_t i = 0; i < dual_columns; ++i) {
      dual.columns[i].cost = static_cast<double>(rng() % 21) - 10.0;
      dual.add_row("box_hi" + std::to_string(i), Sense::kLe, {{i, 1.0}}, 1000.0);
      dual.add_row("box_lo" + std::to_string(i), Sense::kGe, {{i, 1.0}}, -1000.0);
    }
    const LpSolution other = solve(dual);
    ASSERT_EQ(other.status, LpStatus::kOptimal);
    const std::vector<std::vector<double>> duals{s.dual, other.primal};

    for (int t = 0; t <= 10; ++t) {
      const double w = t / 10.0;
      std::vector<double> x(x0.size());
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = w * x0[j] + (1 - w) * s.primal[j];
      ASSERT_LE(max_violation(lp, x).amount, 1e-9);
      for (const auto& p : duals) {
        double pb = 0.0;
        for (std::size_t i = 0; i < lp.rows.size(); ++i) pb += p[i] * lp.rows[i].rhs;
        EXPECT_GE(objective_value(lp, x), pb - 1e-9) << "seed " << seed;
      }
    }
  }
}

TEST(Solve, IsDeterministic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LinearProgram lp = testing_support::random_lp(seed);
    const LpSolution a = solve(lp);
    const LpSolution b = solve(lp);
    EXPECT_EQ(a.primal, b.primal);
    EXPECT_EQ(a.dual, b.dual);
    EXPECT_EQ(a.reduced_cost, b.reduced_cost);
    EXPECT_EQ(a.iterations, b.iterations);
  }
}

TEST(DualityChecks, RejectNonOptimalSolutions) {
  LinearProgram lp;
  lp.add_column("x", Sign::kNonneg, 1.0);
  LpSolution s;
  s.status = LpStatus::kInfeasible;
  EXPECT_THROW(check_strong_duality(lp, s), std::invalid_argument);
  EXPECT_THROW(check_complementary_slackness(lp, s), std::invalid_argument);
}

TEST(DualityChecks, InjectedDualOnSlackRowIsReported) {
  LinearProgram lp;
  const auto x = lp.add_column("x", Sign::kNonneg, 1.0);
  lp.add_row("binding", Sense::kGe, {{x, 1.0}}, 1.0);
  lp.add_row("slack", Sense::kLe, {{x, 1.0}}, 5.0);
  LpSolution s = solve(lp);
  ASSERT_TRUE(check_complementary_slackness(lp, s).pass);
  s.dual[1] = -2.0;
  const auto cs = check_complementary_slackness(lp, s);
  EXPECT_FALSE(cs.pass);
  EXPECT_EQ(cs.worst_row, "slack");
  EXPECT_DOUBLE_EQ(cs.max_row_residual, 8.0);
}

}  // namespace
}  // namespace gridclear
