#include <gtest/gtest.h>

#include <cmath>

#include "bess/error.hpp"
#include "bess/milp/model.hpp"
#include "bess/milp/simplex.hpp"

using namespace bess;
using namespace bess::milp;

TEST(Model, AddVariable) {
  Model m;
  const VarId x = m.add_variable(VarKind::Continuous, 0, 5, "x");
  EXPECT_EQ(x.value, 0u);
  const VarId c = m.add_variable(VarKind::Binary, 0, 1, "c0");
  EXPECT_EQ(m.variable(c).kind, VarKind::Binary);
  EXPECT_EQ(m.num_binaries(), 1u);
  EXPECT_THROW(m.add_variable(VarKind::Continuous, 3, 1, "bad"), ModelError);
  EXPECT_THROW(m.add_variable(VarKind::Binary, 0, 2, "b2"), ModelError);
  EXPECT_THROW(m.add_variable(VarKind::Continuous, 0, 1, "x"), ModelError);
  EXPECT_THROW(m.add_variable(VarKind::Continuous, NAN, 1), ModelError);
  EXPECT_EQ(m.variable(m.add_variable(VarKind::Continuous, 0, 1)).name, "x2");
  EXPECT_EQ(m.find_variable("c0"), c);
}

TEST(Model, AddConstraint) {
  Model m;
  const VarId x = m.add_variable(VarKind::Continuous, 0, 1, "x");
  const VarId y = m.add_variable(VarKind::Continuous, 0, 1, "y");
  const RowId r = m.add_constraint({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
  EXPECT_EQ(m.constraint(r).terms.size(), 2u);
  const RowId e = m.add_constraint({{x, 0.0}}, Sense::Equal, 0);
  EXPECT_TRUE(m.constraint(e).terms.empty());
  EXPECT_EQ(max_violation(m, {0.5, 0.5}), 0.0);
  EXPECT_THROW(m.add_constraint({{VarId{999}, 1}}, Sense::LessEqual, 1), ModelError);
  // Repeated terms merge.
  const RowId d = m.add_constraint({{x, 1}, {x, 2}}, Sense::GreaterEqual, 0);
  ASSERT_EQ(m.constraint(d).terms.size(), 1u);
  EXPECT_EQ(m.constraint(d).terms[0].coef, 3.0);
}

TEST(LpRelaxation, HandExamples) {
  {
    Model m;
    const VarId x = m.add_variable(VarKind::Continuous, 2, 5, "x");
    m.set_objective({{x, 1}});
    const Solution s = solve_lp_relaxation(m);
    ASSERT_EQ(s.status, Status::Optimal);
    EXPECT_NEAR(s.values[0], 2.0, 1e-12);
    EXPECT_NEAR(s.objective_value, 2.0, 1e-12);
  }
  {
    Model m;
    const VarId x = m.add_variable(VarKind::Continuous, 0, 1, "x");
    const VarId y = m.add_variable(VarKind::Continuous, 0, 1, "y");
    m.add_constraint({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
    m.set_objective({{x, -1}, {y, -1}});
    const Solution s = solve_lp_relaxation(m);
    ASSERT_EQ(s.status, Status::Optimal);
    EXPECT_NEAR(s.objective_value, -1.0, 1e-12);
    EXPECT_NEAR(s.values[0] + s.values[1], 1.0, 1e-12);
  }
  {
    Model m;
    const VarId x = m.add_variable(VarKind::Continuous, 0, 10, "x");
    m.add_constraint({{x, 1}}, Sense::GreaterEqual, 3);
    m.add_constraint({{x, 1}}, Sense::LessEqual, 1);
    EXPECT_EQ(solve_lp_relaxation(m).status, Status::Infeasible);
  }
}
