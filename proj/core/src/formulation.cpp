#include "bess/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bess/error.hpp"

namespace bess {

using milp::LinearExpr;
using milp::Model;
using milp::Sense;
using milp::VarId;
using milp::VarKind;

void Weights::validate() const {
  for (double a : {alpha1, alpha2, alpha3}) {
    if (!std::isfinite(a) || a < 0.0) {
      throw ValidationError("weights must be non-negative");
    }
  }
  if (std::abs(alpha1 + alpha2 + alpha3 - 1.0) > 1e-9) {
    throw ValidationError("weights must sum to 1");
  }
}

void Instance::validate() const {
  if (!(pv.horizon() == horizon) || !(load.horizon() == horizon)) {
    throw ValidationError("profiles do not match the instance horizon");
  }
  ess.validate();
  grid.validate();
  feed_in.validate();
  carbon.validate(horizon);
  weights.validate();
}

Instance make_instance(const Profile& pv, const Profile& load) {
  return Instance{pv.horizon(), pv, load, {}, {}, default_tariff(), {}, {}, {}, {}};
}

Instance day_instance(const Instance& in, int day, double soc_init) {
  Instance out = in;
  out.pv = day_slice(in.pv, day);
  out.load = day_slice(in.load, day);
  out.horizon = out.pv.horizon();
  if (!in.carbon.series.empty()) {
    const int n = in.horizon.steps_per_day();
    auto first = in.carbon.series.begin() + static_cast<std::ptrdiff_t>(day) * n;
    out.carbon.series.assign(first, first + n);
  }
  out.ess.soc_init = soc_init;
  return out;
}

namespace {

std::string indexed(const char* base, int t) {
  return std::string(base) + "(" + std::to_string(t) + ")";
}

}  // namespace

BuiltModel build_model(const Instance& in) {
  in.validate();
  const Horizon& h = in.horizon;
  const int n = h.total_steps();
  const int per_day = h.steps_per_day();
  const double dt = h.step_hours();
  const double pn = in.ess.rated_power_kw;
  const double pt = in.grid.transformer_kw;
  const double e = in.ess.capacity_kwh;
  const bool cp = in.ess.constant_power_mode;
  const Weights& w = in.weights;

  BuiltModel out;
  Model& m = out.model;
  VarMap& v = out.vars;
  for (int t = 0; t < n; ++t) {
    v.p_in.push_back(m.add_variable(VarKind::Continuous, 0, pn, indexed("p_in", t)));
    v.p_out.push_back(m.add_variable(VarKind::Continuous, 0, pn, indexed("p_out", t)));
    v.p_dn.push_back(m.add_variable(VarKind::Continuous, 0, pt, indexed("p_dn", t)));
    v.p_up.push_back(m.add_variable(VarKind::Continuous, 0, pt, indexed("p_up", t)));
    v.soc.push_back(m.add_variable(VarKind::Continuous, in.ess.soc_min, in.ess.soc_max,
                                   indexed("soc", t)));
  }
  for (int t = 0; t < n; ++t) {
    v.c.push_back(m.add_variable(VarKind::Binary, 0, 1, indexed("c", t)));
    v.d.push_back(m.add_variable(VarKind::Binary, 0, 1, indexed("d", t)));
    v.s_c.push_back(m.add_variable(VarKind::Binary, 0, 1, indexed("s_c", t)));
    v.s_d.push_back(m.add_variable(VarKind::Binary, 0, 1, indexed("s_d", t)));
    if (cp) {
      double ub = t + 1 < n ? 1.0 : 0.0;
      v.b_c.push_back(m.add_variable(VarKind::Binary, 0, ub, indexed("b_c", t)));
      v.b_d.push_back(m.add_variable(VarKind::Binary, 0, ub, indexed("b_d", t)));
    }
    v.u.push_back(m.add_variable(VarKind::Binary, 0, 1, indexed("u", t)));
  }

  for (int t = 0; t < n; ++t) {
    m.add_constraint({{v.p_in[t], 1}, {v.c[t], -pn}}, Sense::LessEqual, 0,
                     indexed("charge_gate", t));
    m.add_constraint({{v.p_out[t], 1}, {v.d[t], -pn}}, Sense::LessEqual, 0,
                     indexed("discharge_gate", t));
    m.add_constraint({{v.c[t], 1}, {v.d[t], 1}}, Sense::LessEqual, 1,
                     indexed("one_state", t));

    // Energy form of the SOC recursion: E*soc(t) - E*soc(t-1) = stored kWh.
    LinearExpr soc_row{{v.soc[t], e}, {v.p_in[t], -in.ess.eta_c * dt},
                       {v.p_out[t], dt / in.ess.eta_d}};
    double soc_rhs = 0.0;
    if (t == 0) {
      soc_rhs = e * in.ess.soc_init;
    } else {
      soc_row.add(v.soc[t - 1], -e);
    }
    m.add_constraint(soc_row, Sense::Equal, soc_rhs, indexed("soc_balance", t));

    // Start indicators. Each day starts from standby for counting purposes.
    const bool day_start = t % per_day == 0;
    for (auto [state, start, name] :
         {std::tuple{&v.c, &v.s_c, "charge_start"}, std::tuple{&v.d, &v.s_d, "discharge_start"}}) {
      const VarId b = (*state)[t];
      const VarId s = (*start)[t];
      if (day_start) {
        m.add_constraint({{s, 1}, {b, -1}}, Sense::Equal, 0, indexed(name, t));
      } else {
        const VarId prev = (*state)[t - 1];
        std::string base = indexed(name, t);
        m.add_constraint({{s, 1}, {b, -1}, {prev, 1}}, Sense::GreaterEqual, 0,
                         base + ".lo");
        m.add_constraint({{s, 1}, {b, -1}}, Sense::LessEqual, 0, base + ".on");
        m.add_constraint({{s, 1}, {prev, 1}}, Sense::LessEqual, 1, base + ".off");
      }
    }

    m.add_constraint({{v.p_dn[t], 1}, {v.u[t], -pt}}, Sense::LessEqual, 0,
                     indexed("import_gate", t));
    m.add_constraint({{v.p_up[t], 1}, {v.u[t], pt}}, Sense::LessEqual, pt,
                     indexed("export_gate", t));
    m.add_constraint({{v.p_out[t], 1}, {v.p_dn[t], 1}, {v.p_up[t], -1}, {v.p_in[t], -1}},
                     Sense::Equal, in.load[t] - in.pv[t], indexed("balance", t));

    // Valid rows implied by the balance and the gates, tighter in the
    // relaxation: the selector must account for the surplus or deficit the
    // battery does not absorb, and each flow cannot exceed what the balance
    // allows at this step.
    const double net = in.load[t] - in.pv[t];
    const double deficit = std::max(0.0, net);
    const double surplus = std::max(0.0, -net);
    m.add_constraint({{v.p_up[t], 1}, {v.p_out[t], -1}, {v.u[t], -deficit}}, Sense::LessEqual,
                     -net, indexed("export_link", t));
    m.add_constraint({{v.p_dn[t], 1}, {v.p_in[t], -1}, {v.u[t], surplus}}, Sense::LessEqual,
                     net + surplus, indexed("import_link", t));
    const double import_reach = std::min(pt, std::max(0.0, net + pn));
    const double export_reach = std::min(pt, std::max(0.0, pn - net));
    if (import_reach < pt) {
      m.add_constraint({{v.p_dn[t], 1}, {v.u[t], -import_reach}}, Sense::LessEqual, 0,
                       indexed("import_reach", t));
    }
    if (export_reach < pt) {
      m.add_constraint({{v.p_up[t], 1}, {v.u[t], export_reach}}, Sense::LessEqual,
                       export_reach, indexed("export_reach", t));
    }
  }

  for (int day = 0; day < h.days(); ++day) {
    LinearExpr sc, sd;
    for (int t = day * per_day; t < (day + 1) * per_day; ++t) {
      sc.add(v.s_c[t], 1);
      sd.add(v.s_d[t], 1);
    }
    m.add_constraint(sc, Sense::LessEqual, in.ess.max_starts, indexed("charge_cap", day));
    m.add_constraint(sd, Sense::LessEqual, in.ess.max_starts,
                     indexed("discharge_cap", day));
  }

  if (cp) {
    for (int t = 0; t + 1 < n; ++t) {
      for (auto [state, flag, power, name] :
           {std::tuple{&v.c, &v.b_c, &v.p_in, "charge_hold"},
            std::tuple{&v.d, &v.b_d, &v.p_out, "discharge_hold"}}) {
        const VarId b = (*flag)[t];
        const VarId now = (*state)[t];
        const VarId next = (*state)[t + 1];
        const VarId p0 = (*power)[t];
        const VarId p1 = (*power)[t + 1];
        std::string base = indexed(name, t);
        m.add_constraint({{b, 1}, {now, -1}}, Sense::LessEqual, 0, base + ".a");
        m.add_constraint({{b, 1}, {next, -1}}, Sense::LessEqual, 0, base + ".b");
        m.add_constraint({{b, 1}, {now, -1}, {next, -1}}, Sense::GreaterEqual, -1,
                         base + ".and");
        m.add_constraint({{p1, 1}, {p0, -1}, {b, pn}}, Sense::LessEqual, pn, base + ".up");
        m.add_constraint({{p0, 1}, {p1, -1}, {b, pn}}, Sense::LessEqual, pn, base + ".dn");
      }
    }
  }

  if (in.flags.terminal_soc_equals_initial && n > 0) {
    m.add_constraint({{v.soc[n - 1], 1}}, Sense::Equal, in.ess.soc_init, "terminal_soc");
  }

  LinearExpr obj;
  for (int t = 0; t < n; ++t) {
    const double pr = price_at(in.tariff, h, t);
    const double pf = feed_in_factor_at(in.feed_in, h, t);
    const double pc = in.carbon.factor_at(t) * in.carbon.sink_price;
    obj.add(v.p_dn[t], (w.alpha1 * pr + w.alpha2 * pc) * dt);
    obj.add(v.p_up[t], -w.alpha1 * pf * dt);
    if (!in.flags.clamp_f3_nonnegative) {
      obj.add(v.p_up[t], w.alpha3 * pf * dt);
      obj.add(v.p_out[t], -w.alpha3 * pf * dt);
      continue;
    }
    // z = max(0, p_up - p_out). A positive factor pushes z down onto that
    // value by itself; a negative one needs the selector to cap it.
    VarId z = m.add_variable(VarKind::Continuous, 0, pt, indexed("f3_aux", t));
    v.f3_aux.push_back(z);
    m.add_constraint({{z, 1}, {v.p_up[t], -1}, {v.p_out[t], 1}}, Sense::GreaterEqual, 0,
                     indexed("f3_floor", t));
    if (pf < 0.0) {
      VarId y = m.add_variable(VarKind::Binary, 0, 1, indexed("f3_select", t));
      v.f3_select.push_back(y);
      const double big = pt + pn;
      m.add_constraint({{z, 1}, {v.p_up[t], -1}, {v.p_out[t], 1}, {y, big}},
                       Sense::LessEqual, big, indexed("f3_cap", t));
      m.add_constraint({{z, 1}, {y, -pt}}, Sense::LessEqual, 0, indexed("f3_zero", t));
    }
    obj.add(z, w.alpha3 * pf * dt);
  }
  m.set_objective(obj);
  return out;
}

void restrict_power_levels(BuiltModel& built, const std::vector<double>& levels) {
  Model& m = built.model;
  VarMap& v = built.vars;
  const int n = static_cast<int>(v.p_in.size());
  for (int t = 0; t < n; ++t) {
    for (auto [state, power, name] : {std::tuple{&v.c, &v.p_in, "z_c"},
                                      std::tuple{&v.d, &v.p_out, "z_d"}}) {
      LinearExpr pick{{(*state)[t], -1}};
      LinearExpr level{{(*power)[t], -1}};
      for (std::size_t k = 0; k < levels.size(); ++k) {
        VarId z = m.add_variable(VarKind::Binary, 0, 1,
                                 std::string(name) + "_" + std::to_string(k) + "(" +
                                     std::to_string(t) + ")");
        pick.add(z, 1);
        level.add(z, levels[k]);
      }
      m.add_constraint(pick, Sense::Equal, 0, indexed(name, t) + ".pick");
      m.add_constraint(level, Sense::Equal, 0, indexed(name, t) + ".level");
    }
  }
}

namespace {

// Zeroes negligible-power steps at the ends of each block of `state`.
void trim_blocks(std::vector<int>& state, std::vector<double>& power, double eps) {
  const int n = static_cast<int>(state.size());
  int t = 0;
  while (t < n) {
    if (!state[t]) {
      ++t;
      continue;
    }
    int end = t;
    while (end < n && state[end]) ++end;
    int lo = t, hi = end - 1;
    while (lo <= hi && power[lo] <= eps) {
      state[lo] = 0;
      power[lo] = 0.0;
      ++lo;
    }
    while (hi >= lo && power[hi] <= eps) {
      state[hi] = 0;
      power[hi] = 0.0;
      --hi;
    }
    t = end;
  }
}

// Levels a block whose power only wobbles by solver noise.
void flatten_blocks(const std::vector<int>& state, std::vector<double>& power,
                    double noise) {
  const int n = static_cast<int>(state.size());
  int t = 0;
  while (t < n) {
    if (!state[t]) {
      ++t;
      continue;
    }
    int end = t;
    double lo = power[t], hi = power[t], sum = 0.0;
    while (end < n && state[end]) {
      lo = std::min(lo, power[end]);
      hi = std::max(hi, power[end]);
      sum += power[end];
      ++end;
    }
    if (hi - lo <= noise) {
      double mean = sum / (end - t);
      for (int k = t; k < end; ++k) power[k] = mean;
    }
    t = end;
  }
}

}  // namespace

Schedule extract_schedule(const milp::Solution& solution, const VarMap& vars,
                          const Instance& in) {
  if (!solution.has_values()) {
    throw SolverError("cannot extract a schedule: the solve found no feasible point");
  }
  const std::vector<double>& x = solution.values;
  const int n = in.horizon.total_steps();
  const double pn = in.ess.rated_power_kw;
  Schedule s(n);
  for (int t = 0; t < n; ++t) {
    s.charge[t] = x[vars.c[t].value] > 0.5 ? 1 : 0;
    s.discharge[t] = x[vars.d[t].value] > 0.5 ? 1 : 0;
    s.p_in[t] = std::clamp(x[vars.p_in[t].value], 0.0, pn * s.charge[t]);
    s.p_out[t] = std::clamp(x[vars.p_out[t].value], 0.0, pn * s.discharge[t]);
  }
  const double eps = 1e-7 * pn;
  trim_blocks(s.charge, s.p_in, eps);
  trim_blocks(s.discharge, s.p_out, eps);
  if (in.ess.constant_power_mode) {
    flatten_blocks(s.charge, s.p_in, 1e-6 * pn);
    flatten_blocks(s.discharge, s.p_out, 1e-6 * pn);
  }
  s.soc = soc_trajectory(in.ess, in.horizon, s.p_in, s.p_out, s.charge, s.discharge);
  for (double& v : s.soc) v = std::clamp(v, in.ess.soc_min, in.ess.soc_max);
  for (int t = 0; t < n; ++t) {
    double net = in.load[t] + s.p_in[t] - in.pv[t] - s.p_out[t];
    s.p_dn[t] = net > 0.0 ? net : 0.0;
    s.p_up[t] = net < 0.0 ? -net : 0.0;
  }
  return s;
}

double combine(const Weights& w, double f1, double f2, double f3) {
  return w.alpha1 * f1 + w.alpha2 * f2 + w.alpha3 * f3;
}

ObjectiveReport objective_components(const Schedule& s, const Instance& in) {
  const Horizon& h = in.horizon;
  const double dt = h.step_hours();
  ObjectiveReport r;
  for (int t = 0; t < h.total_steps(); ++t) {
    const double pr = price_at(in.tariff, h, t);
    const double pf = feed_in_factor_at(in.feed_in, h, t);
    r.f1 += (s.p_dn[t] * pr - s.p_up[t] * pf) * dt;
    r.f2 += s.p_dn[t] * in.carbon.factor_at(t) * in.carbon.sink_price * dt;
    const int d = s.discharge[t];
    double surplus = s.p_up[t] - s.p_out[t];
    if (in.flags.clamp_f3_nonnegative) surplus = std::max(0.0, surplus);
    r.f3 += (s.p_up[t] * (1 - d) + surplus * d) * pf * dt;
  }
  r.f = combine(in.weights, r.f1, r.f2, r.f3);
  return r;
}

}  // namespace bess
