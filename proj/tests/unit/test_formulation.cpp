#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "bess/error.hpp"
#include "bess/fixtures.hpp"
#include "bess/formulation.hpp"
#include "bess/milp/simplex.hpp"
#include "bess/milp/solver.hpp"

using namespace bess;

namespace {

Instance flat_instance(int n, double pv_kw, double load_kw) {
  const Horizon h(1, n);
  return make_instance(Profile(ProfileKind::Pv, std::vector<double>(n, pv_kw), h),
                       Profile(ProfileKind::Load, std::vector<double>(n, load_kw), h));
}

// Small day: PV bump at noon, steady load. N=24 keeps the MILP quick.
Instance small_day() {
  const int n = 24;
  const Horizon h(1, n);
  std::vector<double> pv(n, 0.0), load(n, 3500.0);
  for (int t = 9; t < 17; ++t) pv[t] = 7000.0 * std::sin(M_PI * (t - 8) / 9.0);
  return make_instance(Profile(ProfileKind::Pv, pv, h), Profile(ProfileKind::Load, load, h));
}

std::size_t count_kind(const milp::Model& m, milp::VarKind kind) {
  std::size_t k = 0;
  for (const milp::Variable& v : m.variables()) k += v.kind == kind;
  return k;
}

}  // namespace

TEST(Weights, Validation) {
  EXPECT_NO_THROW((Weights{0.7, 0.1, 0.2}.validate()));
  EXPECT_THROW((Weights{0.7, 0.2, 0.2}.validate()), ValidationError);
  EXPECT_THROW((Weights{1.1, -0.1, 0.0}.validate()), ValidationError);
}

TEST(Combine, PublishedScenarios) {
  // Weights carry one decimal and components three, so the sums are exact
  // in units of 1e-4; compare there to keep binary rounding out of it.
  auto units = [](double v) { return std::llround(v * 1e4); };
  EXPECT_EQ(units(combine({0.7, 0.1, 0.2}, 3.523, 0.374, -0.347)), 24341);
  EXPECT_EQ(units(combine({0.2, 0.7, 0.1}, 3.546, 0.371, -0.400)), 9289);
  EXPECT_EQ(units(combine({0.1, 0.2, 0.7}, 4.084, 0.387, -0.649)), 315);
  // Each within half a unit of the third decimal of 2.434, 0.929, 0.031.
  EXPECT_LE(std::llabs(24341 - 24340), 5);
  EXPECT_LE(std::llabs(9289 - 9290), 5);
  EXPECT_LE(std::llabs(315 - 310), 5);
}

TEST(BuildModel, VariableCounts) {
  Instance in = flat_instance(4, 0, 0);
  const BuiltModel b = build_model(in);
  EXPECT_EQ(count_kind(b.model, milp::VarKind::Continuous), 5u * 4);
  EXPECT_EQ(count_kind(b.model, milp::VarKind::Binary), 7u * 4);
  in.ess.constant_power_mode = false;
  const BuiltModel c = build_model(in);
  EXPECT_EQ(count_kind(c.model, milp::VarKind::Binary), 5u * 4);
  EXPECT_TRUE(c.vars.b_c.empty());
}

TEST(BuildModel, ZeroInstanceSolvesToZero) {
  Instance in = flat_instance(24, 0, 0);
  in.feed_in.normal_rate = 0;
  const BuiltModel b = build_model(in);
  const milp::Solution s = milp::solve(b.model);
  ASSERT_EQ(s.status, milp::Status::Optimal);
  EXPECT_NEAR(s.objective_value, 0.0, 1e-9);
  const Schedule sched = extract_schedule(s, b.vars, in);
  for (int t = 0; t < 24; ++t) {
    EXPECT_EQ(sched.charge[t] + sched.discharge[t], 0);
    EXPECT_EQ(sched.p_dn[t], 0.0);
  }
  const ObjectiveReport r = objective_components(sched, in);
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.f2, 0.0);
  EXPECT_EQ(r.f3, 0.0);
  EXPECT_EQ(r.f, 0.0);
}

TEST(BuildModel, RelaxationBoundsMilp) {
  Instance in = small_day();
  in.ess.max_starts = 1;
  const BuiltModel b = build_model(in);
  milp::SolverConfig cfg;
  cfg.relative_gap = 1e-9;
  const milp::Solution lp = milp::solve_lp_relaxation(b.model, cfg);
  const milp::Solution ip = milp::solve(b.model, cfg);
  ASSERT_EQ(lp.status, milp::Status::Optimal);
  ASSERT_EQ(ip.status, milp::Status::Optimal);
  EXPECT_LE(lp.objective_value, ip.objective_value + 1e-6);

  // The extracted schedule is valid and prices out at the model objective.
  const Schedule s = extract_schedule(ip, b.vars, in);
  EXPECT_TRUE(validate_schedule(s, in.ess, in.grid, in.pv, in.load).empty());
  EXPECT_NEAR(objective_components(s, in).f, ip.objective_value,
              1e-6 * std::max(1.0, std::abs(ip.objective_value)));
}

TEST(Extract, IdleChargeBecomesStandby) {
  Instance in = flat_instance(24, 0, 100);
  const BuiltModel b = build_model(in);
  milp::Solution s;
  s.status = milp::Status::Optimal;
  s.values.assign(b.model.num_variables(), 0.0);
  s.values[b.vars.c[6].value] = 1.0;  // on, but at zero power
  s.values[b.vars.s_c[6].value] = 1.0;
  for (int t = 0; t < 24; ++t) s.values[b.vars.soc[t].value] = 0.05;
  const Schedule x = extract_schedule(s, b.vars, in);
  EXPECT_EQ(x.charge[6], 0);
  EXPECT_EQ(x.p_in[6], 0.0);
  EXPECT_DOUBLE_EQ(x.p_dn[6], 100.0);
  EXPECT_TRUE(validate_schedule(x, in.ess, in.grid, in.pv, in.load).empty());
  EXPECT_THROW(extract_schedule(milp::Solution{}, b.vars, in), SolverError);
}

TEST(Objective, CarbonOfConstantImport) {
  Instance in = flat_instance(96, 0, 1000);
  in.weights = {0, 1, 0};
  Schedule s(96);
  std::fill(s.p_dn.begin(), s.p_dn.end(), 1000.0);
  const ObjectiveReport r = objective_components(s, in);
  EXPECT_NEAR(r.f2, 1000 * 0.642 * 0.103 * 24, 1e-9);
  EXPECT_NEAR(r.f2, 1587.024, 1e-9);
  EXPECT_DOUBLE_EQ(r.f, r.f2);
}

TEST(Objective, MatchesHandSums) {
  const Instance in = small_day();
  Schedule s(24);
  const double dt = 1.0;
  double f1 = 0, f3 = 0;
  for (int t = 0; t < 24; ++t) {
    const double net = in.load[t] - in.pv[t];
    s.p_dn[t] = std::max(net, 0.0);
    s.p_up[t] = std::max(-net, 0.0);
    const double h = t * dt;
    const double price = h < 8 ? 0.2501 : h < 11 ? 1.0276 : h < 17 ? 0.5976 : h < 22 ? 1.0276 : 0.5976;
    const double feed = (h >= 11 && h <= 15) ? -0.2703 : 0.391;
    f1 += (s.p_dn[t] * price - s.p_up[t] * feed) * dt;
    f3 += s.p_up[t] * feed * dt;
  }
  const ObjectiveReport r = objective_components(s, in);
  EXPECT_NEAR(r.f1, f1, 1e-9 * std::abs(f1));
  EXPECT_NEAR(r.f3, f3, 1e-9 * std::max(1.0, std::abs(f3)));
}

TEST(DayInstance, SlicesEverything) {
  Instance in = make_instance(synthetic_profiles().pv, synthetic_profiles().load);
  in.carbon.series.assign(672, 0.5);
  in.carbon.series[96 + 3] = 0.25;
  const Instance d = day_instance(in, 1, 0.3);
  EXPECT_EQ(d.horizon, Horizon(1, 96));
  EXPECT_EQ(d.pv.values(), day_slice(in.pv, 1).values());
  EXPECT_DOUBLE_EQ(d.ess.soc_init, 0.3);
  EXPECT_DOUBLE_EQ(d.carbon.factor_at(3), 0.25);
  EXPECT_THROW(day_instance(in, 7, 0.3), ValidationError);
}

TEST(PowerLevels, RestrictsToLevels) {
  Instance in = small_day();
  BuiltModel b = build_model(in);
  restrict_power_levels(b, {1000.0, 4000.0});
  milp::SolverConfig cfg;
  cfg.node_limit = 200;  // any feasible point will do
  const milp::Solution s = milp::solve(b.model, cfg);
  ASSERT_TRUE(s.has_values());
  const Schedule x = extract_schedule(s, b.vars, in);
  for (int t = 0; t < 24; ++t) {
    for (double p : {x.p_in[t], x.p_out[t]}) {
      const bool on_level = std::abs(p) < 1e-6 || std::abs(p - 1000) < 1e-6 ||
                            std::abs(p - 4000) < 1e-6;
      EXPECT_TRUE(on_level) << "step " << t << " power " << p;
    }
  }
}
