#include <gtest/gtest.h>

#include <random>

#include "bess/error.hpp"
#include "bess/milp/model.hpp"
#include "bess/milp/simplex.hpp"

using namespace bess::milp;

namespace {

SolverConfig with_method(LpMethod method) {
  SolverConfig c;
  c.lp_method = method;
  return c;
}

// max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
Model textbook_lp() {
  Model m;
  VarId x = m.add_variable(VarKind::Continuous, 0, 100, "x");
  VarId y = m.add_variable(VarKind::Continuous, 0, 100, "y");
  m.add_constraint({{x, 1}}, Sense::LessEqual, 4);
  m.add_constraint({{y, 2}}, Sense::LessEqual, 12);
  m.add_constraint({{x, 3}, {y, 2}}, Sense::LessEqual, 18);
  m.set_objective({{x, -3}, {y, -5}});
  return m;
}

// Random bounded LP that is feasible by construction around a known point.
Model random_lp(std::mt19937_64& rng, int n, int rows) {
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> point(0.0, 5.0);
  std::uniform_int_distribution<int> sense(0, 2);
  Model m;
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    m.add_variable(VarKind::Continuous, -1.0, 10.0);
    x0[j] = point(rng);
  }
  for (int i = 0; i < rows; ++i) {
    LinearExpr e;
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      if (rng() % 3 == 0) continue;
      double a = coef(rng);
      e.add(VarId{static_cast<std::uint32_t>(j)}, a);
      lhs += a * x0[j];
    }
    int s = sense(rng);
    if (s == 0) m.add_constraint(e, Sense::LessEqual, lhs + 1.0);
    if (s == 1) m.add_constraint(e, Sense::GreaterEqual, lhs - 1.0);
    if (s == 2) m.add_constraint(e, Sense::Equal, lhs);
  }
  LinearExpr obj;
  for (int j = 0; j < n; ++j) obj.add(VarId{static_cast<std::uint32_t>(j)}, coef(rng));
  m.set_objective(obj);
  return m;
}

}  // namespace

TEST(Simplex, TextbookLpBothMethods) {
  for (LpMethod method : {LpMethod::Dual, LpMethod::Primal}) {
    Solution s = solve_lp_relaxation(textbook_lp(), with_method(method));
    ASSERT_EQ(s.status, Status::Optimal);
    EXPECT_NEAR(s.objective_value, -36.0, 1e-9);
    EXPECT_NEAR(s.values[0], 2.0, 1e-9);
    EXPECT_NEAR(s.values[1], 6.0, 1e-9);
  }
}

TEST(Simplex, DetectsInfeasibility) {
  Model m;
  VarId x = m.add_variable(VarKind::Continuous, 0, 10, "x");
  VarId y = m.add_variable(VarKind::Continuous, 0, 10, "y");
  m.add_constraint({{x, 1}, {y, 1}}, Sense::GreaterEqual, 5);
  m.add_constraint({{x, 1}, {y, 1}}, Sense::LessEqual, 4);
  for (LpMethod method : {LpMethod::Dual, LpMethod::Primal}) {
    EXPECT_EQ(solve_lp_relaxation(m, with_method(method)).status,
              Status::Infeasible);
  }
}

TEST(Simplex, RejectsUnboundedVariables) {
  Model m;
  m.add_variable(VarKind::Continuous, 0, std::numeric_limits<double>::infinity());
  EXPECT_THROW(solve_lp_relaxation(m), bess::ModelError);
}

TEST(Simplex, NoRows) {
  Model m;
  VarId x = m.add_variable(VarKind::Continuous, -2, 3);
  VarId y = m.add_variable(VarKind::Continuous, -2, 3);
  m.set_objective({{x, 1}, {y, -1}});
  Solution s = solve_lp_relaxation(m);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_DOUBLE_EQ(s.objective_value, -5.0);
}

TEST(Simplex, PrimalAndDualAgreeOnRandomLps) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    Model m = random_lp(rng, 4 + trial % 9, 3 + trial % 11);
    Solution d = solve_lp_relaxation(m, with_method(LpMethod::Dual));
    Solution p = solve_lp_relaxation(m, with_method(LpMethod::Primal));
    ASSERT_EQ(d.status, Status::Optimal) << "trial " << trial;
    ASSERT_EQ(p.status, Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(d.objective_value, p.objective_value,
                1e-6 * std::max(1.0, std::abs(p.objective_value)))
        << "trial " << trial;
    EXPECT_LE(max_violation(m, d.values), 1e-6);
    EXPECT_LE(max_violation(m, p.values), 1e-6);
  }
}

TEST(Simplex, WarmStartAfterBoundChange) {
  Model m = textbook_lp();
  LpEngine engine(m, SolverConfig{});
  ASSERT_EQ(engine.solve(), LpStatus::Optimal);
  engine.set_bounds(1, 0, 5);  // y <= 5: optimum moves to (8/3, 5) = 33
  ASSERT_EQ(engine.solve_dual(), LpStatus::Optimal);
  EXPECT_NEAR(engine.objective(), -33.0, 1e-9);
  engine.restore_model_bounds();
  ASSERT_EQ(engine.solve_dual(), LpStatus::Optimal);
  EXPECT_NEAR(engine.objective(), -36.0, 1e-9);
}

namespace {

// Beale's instance: cycles under largest-coefficient pricing with
// lowest-index tie breaking.
Model beale() {
  Model m;
  VarId x4 = m.add_variable(VarKind::Continuous, 0, 100, "x4");
  VarId x5 = m.add_variable(VarKind::Continuous, 0, 100, "x5");
  VarId x6 = m.add_variable(VarKind::Continuous, 0, 100, "x6");
  VarId x7 = m.add_variable(VarKind::Continuous, 0, 100, "x7");
  m.add_constraint({{x4, 0.25}, {x5, -60}, {x6, -1.0 / 25}, {x7, 9}},
                   Sense::LessEqual, 0);
  m.add_constraint({{x4, 0.5}, {x5, -90}, {x6, -1.0 / 50}, {x7, 3}},
                   Sense::LessEqual, 0);
  m.add_constraint({{x6, 1}}, Sense::LessEqual, 1);
  m.set_objective({{x4, -0.75}, {x5, 150}, {x6, -1.0 / 50}, {x7, 6}});
  return m;
}

SolverConfig beale_config() {
  SolverConfig c;
  c.lp_method = LpMethod::Primal;
  c.scaling = false;
  c.textbook_ratio_test = true;
  return c;
}

}  // namespace

TEST(Simplex, BealeCyclesWithoutFallback) {
  SolverConfig c = beale_config();
  c.degenerate_threshold = 1'000'000;
  c.iteration_limit = 500;
  LpEngine engine(beale(), c);
  EXPECT_EQ(engine.solve(), LpStatus::IterationLimit);
}

TEST(Simplex, BlandFallbackBreaksBealeCycle) {
  Solution s = solve_lp_relaxation(beale(), beale_config());
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective_value, -0.05, 1e-9);
  EXPECT_NEAR(s.values[0], 1.0 / 25, 1e-9);
  EXPECT_NEAR(s.values[2], 1.0, 1e-9);
  EXPECT_GE(s.stats.bland_switches, 1u);
}
