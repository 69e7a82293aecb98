#include <gtest/gtest.h>

#include <random>

#include "bess/error.hpp"
#include "bess/milp/lp_format.hpp"
#include "bess/milp/solver.hpp"

using namespace bess::milp;

TEST(LpFormat, EmptyModel) {
  std::string text = write_lp(Model{});
  EXPECT_EQ(text, "Minimize\n obj: 0\nSubject To\nBounds\nBinaries\nEnd\n");
  Model back = read_lp(text);
  EXPECT_EQ(back.num_variables(), 0u);
  EXPECT_EQ(back.num_constraints(), 0u);
}

TEST(LpFormat, LiteralEmission) {
  Model m;
  VarId x = m.add_variable(VarKind::Continuous, 0, 10, "x");
  m.set_objective({{x, 1}});
  m.add_constraint({{x, 1}}, Sense::LessEqual, 3, "cap");
  std::string text = write_lp(m);
  EXPECT_NE(text.find("1 x <= 3"), std::string::npos);
  EXPECT_EQ(text, write_lp(m));
}

TEST(LpFormat, RoundTripKeepsEverything) {
  Model m;
  VarId a = m.add_variable(VarKind::Continuous, -2.5, 1.0 / 3.0, "a");
  VarId b = m.add_variable(VarKind::Binary, 0, 1, "b");
  VarId c = m.add_variable(VarKind::Binary, 1, 1, "c(1)");
  m.set_objective({{a, 0.1}, {b, -7e-12}, {c, 3}});
  m.add_constraint({{a, 1}, {b, -1e20}}, Sense::GreaterEqual, -0.3, "r.1");
  m.add_constraint({}, Sense::Equal, 0, "empty");
  m.add_constraint({{c, 2}, {a, 0.7}}, Sense::Equal, 1.25);
  Model back = read_lp(write_lp(m));
  ASSERT_EQ(back.num_variables(), 3u);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(back.variables()[j].name, m.variables()[j].name);
    EXPECT_EQ(back.variables()[j].kind, m.variables()[j].kind);
    EXPECT_EQ(back.variables()[j].lower, m.variables()[j].lower);
    EXPECT_EQ(back.variables()[j].upper, m.variables()[j].upper);
  }
  EXPECT_EQ(back.objective(), m.objective());
  ASSERT_EQ(back.num_constraints(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& x = m.constraints()[i];
    const auto& y = back.constraints()[i];
    EXPECT_EQ(x.name, y.name);
    EXPECT_EQ(x.sense, y.sense);
    EXPECT_EQ(x.rhs, y.rhs);
    ASSERT_EQ(x.terms.size(), y.terms.size());
    for (std::size_t k = 0; k < x.terms.size(); ++k) {
      EXPECT_EQ(x.terms[k].var.value, y.terms[k].var.value);
      EXPECT_EQ(x.terms[k].coef, y.terms[k].coef);
    }
  }
  EXPECT_EQ(write_lp(back), write_lp(m));
}

TEST(LpFormat, AcceptsLooseDialect) {
  Model m = read_lp(
      "\\ hand written\n"
      "minimize\n  - x + 2 y\n"
      "subject to\n  x + y <= 4\n  c2: x - y >= -1\n"
      "bounds\n  x <= 3\n  -1 <= y <= 5\n"
      "end\n");
  ASSERT_EQ(m.num_variables(), 2u);
  EXPECT_EQ(m.variables()[0].name, "x");
  EXPECT_EQ(m.variables()[0].upper, 3.0);
  Solution s = solve(m);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective_value, -5.0, 1e-9);  // x = 3, y = -1
}

TEST(LpFormat, MissingEnd) {
  EXPECT_THROW(read_lp("Minimize\n obj: 0\nSubject To\n"), bess::ParseError);
}

TEST(LpFormat, GarbledCoefficientHasLocation) {
  try {
    read_lp("Minimize\n obj: 1.2.3 x\nEnd\n");
    FAIL() << "expected a parse error";
  } catch (const bess::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 7);
  }
}

TEST(LpFormat, UnknownSection) {
  EXPECT_THROW(read_lp("Maximize\n obj: x\nEnd\n"), bess::ParseError);
  EXPECT_THROW(read_lp("Foo\nEnd\n"), bess::ParseError);
  EXPECT_THROW(read_lp("Minimize\n obj: x\nGenerals\n x\nEnd\n"), bess::ParseError);
}

TEST(LpFormat, DuplicateVariable) {
  EXPECT_THROW(read_lp("Minimize\n obj: 1 x\nBounds\n 0 <= x <= 1\n 0 <= x <= 2\nEnd\n"),
               bess::ParseError);
  EXPECT_THROW(read_lp("Minimize\n obj: 1 x\nBinaries\n x\n x\nEnd\n"),
               bess::ParseError);
}
