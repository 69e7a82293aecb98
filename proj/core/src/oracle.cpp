#include "bess/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bess/error.hpp"
#include "bess/milp/solver.hpp"
#include "bess/tariff.hpp"

namespace bess {

void DiscretizedInstance::validate() const {
  instance.validate();
  const auto& lv = power_levels;
  if (lv.empty() || std::find(lv.begin(), lv.end(), 0.0) == lv.end()) {
    throw ValidationError("power_levels must contain 0");
  }
  if (!std::is_sorted(lv.begin(), lv.end()) ||
      std::adjacent_find(lv.begin(), lv.end()) != lv.end()) {
    throw ValidationError("power_levels must be strictly increasing");
  }
  if (lv.front() < 0.0 || lv.back() > instance.ess.rated_power_kw) {
    throw ValidationError("power_levels must lie within [0, rated_power_kw]");
  }
}

namespace {

constexpr double kSocTol = 1e-9;

// Mode 0 is standby, 1..L charge at level k, L+1..2L discharge at level k.
struct Modes {
  std::vector<double> levels;  // positive levels
  int size() const { return 1 + 2 * static_cast<int>(levels.size()); }
  int kind(int m) const {
    if (m == 0) return 0;
    return m <= static_cast<int>(levels.size()) ? 1 : 2;
  }
  double power(int m) const {
    if (m == 0) return 0.0;
    const int l = static_cast<int>(levels.size());
    return levels[(m <= l ? m : m - l) - 1];
  }
};

Modes modes_of(const DiscretizedInstance& d) {
  Modes out;
  for (double l : d.power_levels) {
    if (l > 0.0) out.levels.push_back(l);
  }
  return out;
}

// Whether mode `m` may follow `prev`, and which starts it adds.
struct Step {
  bool ok;
  bool charge_start;
  bool discharge_start;
};

Step transition(const Modes& modes, const EssParams& ess, int prev, int m, bool day_start) {
  const int k = modes.kind(m);
  const int pk = modes.kind(prev);
  if (ess.constant_power_mode && k != 0 && k == pk && modes.power(m) != modes.power(prev)) {
    return {false, false, false};
  }
  const int start_prev = day_start ? 0 : pk;
  return {true, k == 1 && start_prev != 1, k == 2 && start_prev != 2};
}

}  // namespace

double sequence_count(const DiscretizedInstance& dinst) {
  dinst.validate();
  const Instance& in = dinst.instance;
  const Modes modes = modes_of(dinst);
  const int nm = modes.size();
  const int cap = in.ess.max_starts;
  const int n = in.horizon.total_steps();
  const int per_day = in.horizon.steps_per_day();
  // ways[prev][charge starts][discharge starts]
  using Table = std::vector<std::vector<std::vector<double>>>;
  auto blank = [&] {
    return Table(nm, std::vector<std::vector<double>>(cap + 1, std::vector<double>(cap + 1, 0.0)));
  };
  Table ways = blank();
  ways[0][0][0] = 1.0;
  for (int t = 0; t < n; ++t) {
    const bool day_start = t % per_day == 0;
    if (day_start && t > 0) {
      Table reset = blank();
      for (int p = 0; p < nm; ++p) {
        for (int a = 0; a <= cap; ++a) {
          for (int b = 0; b <= cap; ++b) reset[p][0][0] += ways[p][a][b];
        }
      }
      ways = std::move(reset);
    }
    Table next = blank();
    for (int p = 0; p < nm; ++p) {
      for (int a = 0; a <= cap; ++a) {
        for (int b = 0; b <= cap; ++b) {
          const double w = ways[p][a][b];
          if (w == 0.0) continue;
          for (int m = 0; m < nm; ++m) {
            const Step s = transition(modes, in.ess, p, m, day_start);
            const int na = a + s.charge_start;
            const int nb = b + s.discharge_start;
            if (!s.ok || na > cap || nb > cap) continue;
            next[m][na][nb] = std::min(next[m][na][nb] + w, 1e300);
          }
        }
      }
    }
    ways = std::move(next);
  }
  double total = 0.0;
  for (const auto& plane : ways) {
    for (const auto& row : plane) {
      for (double w : row) total += w;
    }
  }
  return total;
}

namespace {

class Enumerator {
 public:
  explicit Enumerator(const DiscretizedInstance& dinst)
      : in_(dinst.instance), modes_(modes_of(dinst)), n_(in_.horizon.total_steps()),
        per_day_(in_.horizon.steps_per_day()), path_(n_, 0), best_path_(n_, 0) {
    const Horizon& h = in_.horizon;
    const EssParams& ess = in_.ess;
    const double dt = h.step_hours();
    const int nm = modes_.size();
    cost_.assign(n_, std::vector<double>(nm, 0.0));
    allowed_.assign(n_, std::vector<char>(nm, 0));
    dsoc_.assign(nm, 0.0);
    for (int m = 0; m < nm; ++m) {
      const double p = modes_.power(m);
      if (modes_.kind(m) == 1) dsoc_[m] = ess.eta_c * p * dt / ess.capacity_kwh;
      if (modes_.kind(m) == 2) dsoc_[m] = -p * dt / (ess.eta_d * ess.capacity_kwh);
    }
    const double pt = in_.grid.transformer_kw;
    for (int t = 0; t < n_; ++t) {
      const double pr = price_at(in_.tariff, h, t);
      const double pf = feed_in_factor_at(in_.feed_in, h, t);
      const double pc = in_.carbon.factor_at(t) * in_.carbon.sink_price;
      for (int m = 0; m < nm; ++m) {
        const int k = modes_.kind(m);
        const double p_in = k == 1 ? modes_.power(m) : 0.0;
        const double p_out = k == 2 ? modes_.power(m) : 0.0;
        const double x = in_.load[t] - in_.pv[t] + p_in - p_out;
        const double p_dn = std::max(x, 0.0);
        const double p_up = std::max(-x, 0.0);
        allowed_[t][m] = p_dn <= pt * (1.0 + 1e-12) && p_up <= pt * (1.0 + 1e-12);
        const double f1 = (p_dn * pr - p_up * pf) * dt;
        const double f2 = p_dn * pc * dt;
        double surplus = p_up - p_out;
        if (in_.flags.clamp_f3_nonnegative) surplus = std::max(0.0, surplus);
        const double f3 = (k == 2 ? surplus : p_up) * pf * dt;
        cost_[t][m] = combine(in_.weights, f1, f2, f3);
      }
    }
  }

  void run() { visit(0, 0, in_.ess.soc_init, 0, 0, 0.0); }

  bool found() const { return best_ < std::numeric_limits<double>::infinity(); }
  const std::vector<int>& best_path() const { return best_path_; }
  std::uint64_t sequences() const { return sequences_; }

 private:
  void visit(int t, int prev, double soc, int cs, int ds, double acc) {
    if (t == n_) {
      if (in_.flags.terminal_soc_equals_initial &&
          std::abs(soc - in_.ess.soc_init) > kSocTol) {
        return;
      }
      ++sequences_;
      if (acc < best_) {
        best_ = acc;
        best_path_ = path_;
      }
      return;
    }
    const bool day_start = t % per_day_ == 0;
    if (day_start) cs = ds = 0;
    const EssParams& ess = in_.ess;
    for (int m = 0; m < modes_.size(); ++m) {
      if (!allowed_[t][m]) continue;
      const Step s = transition(modes_, ess, prev, m, day_start);
      if (!s.ok) continue;
      const int nc = cs + s.charge_start;
      const int nd = ds + s.discharge_start;
      if (nc > ess.max_starts || nd > ess.max_starts) continue;
      const double next = soc + dsoc_[m];
      if (next < ess.soc_min - kSocTol || next > ess.soc_max + kSocTol) continue;
      path_[t] = m;
      visit(t + 1, m, next, nc, nd, acc + cost_[t][m]);
    }
  }

  const Instance& in_;
  Modes modes_;
  int n_;
  int per_day_;
  std::vector<std::vector<double>> cost_;
  std::vector<std::vector<char>> allowed_;
  std::vector<double> dsoc_;
  std::vector<int> path_;
  std::vector<int> best_path_;
  double best_ = std::numeric_limits<double>::infinity();
  std::uint64_t sequences_ = 0;
};

}  // namespace

OracleResult brute_force_optimal(const DiscretizedInstance& dinst) {
  const double count = sequence_count(dinst);
  if (count > kMaxOracleSequences) {
    throw ValidationError("oracle instance too large: " + std::to_string(count) +
                          " mode sequences (limit 1e8)");
  }
  Enumerator e(dinst);
  e.run();
  if (!e.found()) throw SolverError("oracle: no feasible mode sequence");

  const Instance& in = dinst.instance;
  const Modes modes = modes_of(dinst);
  const int n = in.horizon.total_steps();
  OracleResult out;
  out.schedule = Schedule(n);
  Schedule& s = out.schedule;
  for (int t = 0; t < n; ++t) {
    const int m = e.best_path()[t];
    if (modes.kind(m) == 1) {
      s.charge[t] = 1;
      s.p_in[t] = modes.power(m);
    } else if (modes.kind(m) == 2) {
      s.discharge[t] = 1;
      s.p_out[t] = modes.power(m);
    }
    const double x = in.load[t] - in.pv[t] + s.p_in[t] - s.p_out[t];
    s.p_dn[t] = std::max(x, 0.0);
    s.p_up[t] = std::max(-x, 0.0);
  }
  s.soc = soc_trajectory(in.ess, in.horizon, s.p_in, s.p_out, s.charge, s.discharge);
  out.objective = objective_components(s, in).f;
  out.sequences = e.sequences();
  return out;
}

namespace {

std::string describe(const char* what, double a, double b) {
  return std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b) +
         " (difference " + std::to_string(a - b) + ")";
}

}  // namespace

CertifyReport certify(const DiscretizedInstance& dinst, const milp::SolverConfig& config,
                      double tolerance) {
  CertifyReport r;
  const Instance& in = dinst.instance;
  const OracleResult oracle = brute_force_optimal(dinst);
  r.oracle_objective = oracle.objective;

  ValidationOptions vopt;
  vopt.terminal_soc_equals_initial = in.flags.terminal_soc_equals_initial;
  auto check = [&](const Schedule& s, const char* who) {
    for (Violation v : validate_schedule(s, in.ess, in.grid, in.pv, in.load, vopt)) {
      v.detail = std::string(who) + ": " + v.detail;
      r.violations.push_back(std::move(v));
    }
  };
  check(oracle.schedule, "oracle");

  std::vector<double> positive;
  for (double l : dinst.power_levels) {
    if (l > 0.0) positive.push_back(l);
  }
  BuiltModel restricted = build_model(in);
  restrict_power_levels(restricted, positive);
  const milp::Solution rs = milp::solve(restricted.model, config);
  r.restricted_status = rs.status;
  r.restricted_objective = rs.objective_value;
  if (rs.has_values()) {
    r.restricted_schedule = extract_schedule(rs, restricted.vars, in);
    check(r.restricted_schedule, "restricted");
  }

  BuiltModel continuous = build_model(in);
  const milp::Solution cs = milp::solve(continuous.model, config);
  r.continuous_status = cs.status;
  r.continuous_objective = cs.objective_value;
  if (cs.has_values()) {
    r.continuous_schedule = extract_schedule(cs, continuous.vars, in);
    check(r.continuous_schedule, "continuous");
  }

  std::vector<std::string> problems;
  if (rs.status != milp::Status::Optimal) {
    problems.push_back("restricted MILP status " + std::string(milp::to_string(rs.status)));
  } else if (std::abs(rs.objective_value - oracle.objective) > tolerance) {
    problems.push_back(describe("restricted MILP vs oracle", rs.objective_value, oracle.objective));
  }
  if (cs.status != milp::Status::Optimal) {
    problems.push_back("continuous MILP status " + std::string(milp::to_string(cs.status)));
  } else if (cs.objective_value > oracle.objective + tolerance) {
    problems.push_back(describe("continuous MILP above oracle", cs.objective_value,
                                oracle.objective));
  }
  if (!r.violations.empty()) {
    problems.push_back(std::to_string(r.violations.size()) + " violations, first " +
                       to_string(r.violations.front()));
  }
  for (const std::string& p : problems) {
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += p;
  }
  r.passed = problems.empty();
  return r;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Whole watts keep the generated numbers short.
double watts(double kw) { return std::round(kw * 1000.0) / 1000.0; }

}  // namespace

DiscretizedInstance random_oracle_instance(std::uint64_t seed, int steps) {
  std::mt19937_64 rng(seed);
  Horizon h(1, steps);
  std::vector<double> pv(steps), load(steps);
  const double peak = uniform(rng, 1000.0, 8000.0);
  const double base = uniform(rng, 1500.0, 4500.0);
  for (int t = 0; t < steps; ++t) {
    const double hour = (t + 0.5) * h.step_hours();
    const double shape = std::cos(3.14159265358979323846 * (hour - 13.0) / 14.0);
    pv[t] = shape > 0.0 ? watts(peak * std::pow(shape, 1.5) * uniform(rng, 0.9, 1.1)) : 0.0;
    load[t] = watts(base * uniform(rng, 0.85, 1.15));
  }
  Instance in = make_instance(Profile(ProfileKind::Pv, pv, h), Profile(ProfileKind::Load, load, h));
  EssParams& e = in.ess;
  e.capacity_kwh = watts(uniform(rng, 4000.0, 16000.0));
  e.rated_power_kw = watts(uniform(rng, 500.0, 3000.0));
  e.soc_min = uniform(rng, 0.0, 0.2);
  e.soc_max = uniform(rng, 0.8, 1.0);
  e.soc_init = uniform(rng, e.soc_min, e.soc_max);
  e.eta_c = uniform(rng, 0.85, 0.97);
  e.eta_d = uniform(rng, 0.85, 0.97);
  e.max_starts = 1 + static_cast<int>(rng() % 2);
  in.grid.transformer_kw = watts(uniform(rng, 6000.0, 12000.0));
  in.feed_in.normal_rate = uniform(rng, 0.0, 0.4);
  in.feed_in.reop_rate = uniform(rng, -0.3, 0.3);
  in.feed_in.reop_start = uniform(rng, 9.0, 13.0);
  in.feed_in.reop_end = uniform(rng, 13.0, 17.0);
  in.carbon.factor = uniform(rng, 0.1, 0.8);
  const double a = uniform(rng, 0.0, 1.0);
  const double b = uniform(rng, 0.0, 1.0 - a);
  in.weights = {a, b, 1.0 - a - b};
  return {in, {0.0, e.rated_power_kw / 2.0, e.rated_power_kw}};
}

}  // namespace bess
