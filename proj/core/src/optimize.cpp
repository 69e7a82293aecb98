#include "bess/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "bess/error.hpp"
#include "bess/milp/simplex.hpp"
#include "bess/milp/solver.hpp"
#include "bess/strategy.hpp"

namespace bess {

namespace {

using Clock = std::chrono::steady_clock;
using milp::LpStatus;
using milp::VarId;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Battery state per step.
constexpr std::int8_t kIdle = 0;
constexpr std::int8_t kCharge = 1;
constexpr std::int8_t kDischarge = 2;

using Pattern = std::vector<std::int8_t>;

struct Block {
  int first = 0;
  int last = 0;
  std::int8_t kind = kIdle;
};

std::vector<Block> blocks_of(const Pattern& x) {
  std::vector<Block> out;
  const int n = static_cast<int>(x.size());
  for (int t = 0; t < n;) {
    if (x[t] == kIdle) {
      ++t;
      continue;
    }
    Block b{t, t, x[t]};
    while (b.last + 1 < n && x[b.last + 1] == b.kind) ++b.last;
    out.push_back(b);
    t = b.last + 1;
  }
  return out;
}

bool all_idle(const Pattern& x, int first, int last) {
  for (int t = first; t <= last; ++t) {
    if (x[t] != kIdle) return false;
  }
  return true;
}

void fill(Pattern& x, int first, int last, std::int8_t kind) {
  for (int t = first; t <= last; ++t) x[t] = kind;
}

// Local search over which steps charge, discharge or stand by. A pattern
// fixes every state, start and hold binary; the LP over the remaining
// variables then sets the powers, so each candidate costs one warm-started
// dual simplex solve.
class BlockSearch {
 public:
  BlockSearch(const Instance& in, const BuiltModel& built, const milp::SolverConfig& config,
              std::optional<Clock::time_point> deadline, std::uint64_t max_evaluations)
      : in_(in), built_(built), engine_(built.model, config), deadline_(deadline),
        max_evaluations_(max_evaluations),
        n_(in.horizon.total_steps()), per_day_(in.horizon.steps_per_day()) {
    const VarMap& v = built.vars;
    std::vector<char> pinned(built.model.num_variables(), 0);
    for (const auto* ids : {&v.c, &v.d, &v.s_c, &v.s_d, &v.b_c, &v.b_d, &v.u}) {
      for (VarId id : *ids) pinned[id.value] = 1;
    }
    for (std::size_t j = 0; j < pinned.size(); ++j) {
      const auto& var = built.model.variables()[j];
      if (!pinned[j] && var.kind == milp::VarKind::Binary) {
        others_.push_back(static_cast<int>(j));
      }
    }
  }

  std::uint64_t evaluations() const noexcept { return evaluations_; }
  const std::vector<double>& point() const noexcept { return point_; }

  bool exhausted() const {
    return evaluations_ >= max_evaluations_ || (deadline_ && Clock::now() > *deadline_);
  }

  bool admissible(const Pattern& x) const {
    for (int day = 0; day * per_day_ < n_; ++day) {
      int charge = 0, discharge = 0;
      for (int t = day * per_day_; t < (day + 1) * per_day_; ++t) {
        const std::int8_t prev = t == day * per_day_ ? kIdle : x[t - 1];
        charge += x[t] == kCharge && prev != kCharge;
        discharge += x[t] == kDischarge && prev != kDischarge;
      }
      if (charge > in_.ess.max_starts || discharge > in_.ess.max_starts) return false;
    }
    return true;
  }

  // Drops the shortest block until the start caps hold.
  void make_admissible(Pattern& x) const {
    while (!admissible(x)) {
      std::vector<Block> b = blocks_of(x);
      auto shortest = std::min_element(b.begin(), b.end(), [](const Block& l, const Block& r) {
        return l.last - l.first < r.last - r.first;
      });
      fill(x, shortest->first, shortest->last, kIdle);
    }
  }

  // Rounded states of the continuous relaxation.
  Pattern from_relaxation() {
    Pattern x(n_, kIdle);
    engine_.restore_model_bounds();
    if (engine_.solve() != LpStatus::Optimal) return x;
    const std::vector<double> val = engine_.values();
    const VarMap& v = built_.vars;
    for (int t = 0; t < n_; ++t) {
      const double c = val[v.c[t].value];
      const double d = val[v.d[t].value];
      if (c > 0.5 && c >= d) {
        x[t] = kCharge;
      } else if (d > 0.5) {
        x[t] = kDischarge;
      }
    }
    make_admissible(x);
    return x;
  }

  // Cost of the best completion of `x`, or infinity. `selector` optionally
  // pins the import/export choice of every step. The completed point is kept
  // in point().
  double evaluate(const Pattern& x, const std::vector<int>* selector = nullptr) {
    ++evaluations_;
    const VarMap& v = built_.vars;
    auto fix = [&](VarId id, double value) { engine_.set_bounds(id.value, value, value); };
    for (int t = 0; t < n_; ++t) {
      const bool day_start = t % per_day_ == 0;
      const std::int8_t prev = day_start ? kIdle : x[t - 1];
      const std::int8_t next = t + 1 < n_ ? x[t + 1] : kIdle;
      const bool c = x[t] == kCharge;
      const bool d = x[t] == kDischarge;
      fix(v.c[t], c);
      fix(v.d[t], d);
      fix(v.s_c[t], c && prev != kCharge);
      fix(v.s_d[t], d && prev != kDischarge);
      if (!v.b_c.empty()) {
        fix(v.b_c[t], c && next == kCharge);
        fix(v.b_d[t], d && next == kDischarge);
      }
      // The exchange direction is forced unless the battery can flip it.
      const double net = in_.load[t] - in_.pv[t];
      if (selector) {
        fix(v.u[t], (*selector)[t]);
      } else if ((c && net < 0.0) || (d && net > 0.0)) {
        engine_.set_bounds(v.u[t].value, 0.0, 1.0);
      } else {
        fix(v.u[t], c ? 1.0 : d ? 0.0 : (net > 0.0 ? 1.0 : 0.0));
      }
    }
    for (int j : others_) {
      const auto& var = built_.model.variables()[j];
      engine_.set_bounds(j, var.lower, var.upper);
    }
    if (engine_.solve() != LpStatus::Optimal) return kInf;

    // Round what is still fractional and re-solve.
    for (int round = 0; round < 4; ++round) {
      std::vector<double> val = engine_.values();
      bool changed = false;
      for (int t = 0; t < n_; ++t) {
        const int j = static_cast<int>(v.u[t].value);
        if (engine_.lower(j) == engine_.upper(j)) continue;
        if (std::abs(val[j] - std::round(val[j])) <= 1e-9) continue;
        const double flow = in_.load[t] - in_.pv[t] + val[v.p_in[t].value] - val[v.p_out[t].value];
        engine_.set_bounds(j, flow > 0.0, flow > 0.0);
        changed = true;
      }
      for (int j : others_) {
        if (engine_.lower(j) == engine_.upper(j)) continue;
        const double r = std::round(val[j]);
        engine_.set_bounds(j, r, r);
        changed = true;
      }
      if (!changed) break;
      if (engine_.solve() != LpStatus::Optimal) return kInf;
    }
    point_ = engine_.values();
    for (VarId id : v.u) {
      double& u = point_[id.value];
      if (std::abs(u - std::round(u)) > 1e-6) return kInf;
      u = std::round(u);
    }
    for (int j : others_) point_[j] = std::round(point_[j]);
    for (const auto* ids : {&v.c, &v.d, &v.s_c, &v.s_d, &v.b_c, &v.b_d}) {
      for (VarId id : *ids) point_[id.value] = std::round(point_[id.value]);
    }
    return built_.model.evaluate_objective(point_);
  }

  // Neighbourhoods in order: moving block edges, dropping or flipping a
  // block, adding a block in an idle stretch, adding a charge/discharge pair
  // (a whole extra cycle). The best candidate of the first class that
  // improves is taken.
  void improve(Pattern& x, double& value, std::vector<double>& point) {
    const int unit = std::max(1, per_day_ / 96);
    std::vector<int> deltas;
    for (int k : {1, 2, 4, 8, 16, 32}) {
      deltas.push_back(k * unit);
      deltas.push_back(-k * unit);
    }
    const int stride = std::max(1, per_day_ / 24);
    std::vector<int> lengths;
    for (int hours : {1, 2, 4}) {
      int len = std::max(1, hours * per_day_ / 24);
      if (std::find(lengths.begin(), lengths.end(), len) == lengths.end()) lengths.push_back(len);
    }

    std::set<Pattern> seen{x};
    bool improved = true;
    while (improved && !exhausted()) {
      improved = false;
      for (int cls = 0; cls < 4 && !improved; ++cls) {
        std::vector<Pattern> cand;
        const std::vector<Block> blocks = blocks_of(x);
        if (cls == 0) {
          for (const Block& b : blocks) edge_moves(x, b, deltas, cand);
        } else if (cls == 1) {
          for (const Block& b : blocks) {
            Pattern y = x;
            fill(y, b.first, b.last, kIdle);
            cand.push_back(y);
            fill(y, b.first, b.last, b.kind == kCharge ? kDischarge : kCharge);
            cand.push_back(std::move(y));
          }
        } else if (cls == 2) {
          for (std::int8_t kind : {kCharge, kDischarge}) {
            for (int a = 0; a < n_; a += stride) {
              for (int len : lengths) {
                if (a + len > n_ || !all_idle(x, a, a + len - 1)) continue;
                Pattern y = x;
                fill(y, a, a + len - 1, kind);
                cand.push_back(std::move(y));
              }
            }
          }
        } else {
          for (int a = 0; a < n_; a += stride) {
            for (int len1 : lengths) {
              for (int len2 : lengths) {
                const int mid = a + len1;
                const int end = mid + len2;
                if (end > n_ || !all_idle(x, a, end - 1)) continue;
                Pattern y = x;
                fill(y, a, mid - 1, kCharge);
                fill(y, mid, end - 1, kDischarge);
                cand.push_back(std::move(y));
              }
            }
          }
        }
        double best = value;
        Pattern best_x;
        for (Pattern& y : cand) {
          if (exhausted()) break;
          if (!admissible(y) || !seen.insert(y).second) continue;
          const double f = evaluate(y);
          if (f < best - 1e-9 * std::max(1.0, std::abs(best))) {
            best = f;
            best_x = std::move(y);
            point = point_;
          }
        }
        if (!best_x.empty()) {
          x = std::move(best_x);
          value = best;
          improved = true;
        }
      }
    }
  }

 private:
  void edge_moves(const Pattern& x, const Block& b, const std::vector<int>& deltas,
                  std::vector<Pattern>& cand) const {
    for (int dl : deltas) {
      // Start edge.
      const int a = b.first + dl;
      if (dl < 0 && a >= 0 && all_idle(x, a, b.first - 1)) {
        Pattern y = x;
        fill(y, a, b.first - 1, b.kind);
        cand.push_back(std::move(y));
      } else if (dl > 0 && a <= b.last) {
        Pattern y = x;
        fill(y, b.first, a - 1, kIdle);
        cand.push_back(std::move(y));
      }
      // End edge.
      const int e = b.last + dl;
      if (dl > 0 && e < n_ && all_idle(x, b.last + 1, e)) {
        Pattern y = x;
        fill(y, b.last + 1, e, b.kind);
        cand.push_back(std::move(y));
      } else if (dl < 0 && e >= b.first) {
        Pattern y = x;
        fill(y, e + 1, b.last, kIdle);
        cand.push_back(std::move(y));
      }
      // Whole block.
      if (b.first + dl >= 0 && b.last + dl < n_) {
        Pattern y = x;
        fill(y, b.first, b.last, kIdle);
        if (all_idle(y, b.first + dl, b.last + dl)) {
          fill(y, b.first + dl, b.last + dl, b.kind);
          cand.push_back(std::move(y));
        }
      }
      // Border with an adjacent block of the other kind.
      if (b.last + 1 < n_ && x[b.last + 1] != kIdle && x[b.last + 1] != b.kind) {
        const std::int8_t other = x[b.last + 1];
        int other_last = b.last + 1;
        while (other_last + 1 < n_ && x[other_last + 1] == other) ++other_last;
        if (e >= b.first && e < other_last) {
          Pattern y = x;
          fill(y, b.first, e, b.kind);
          fill(y, e + 1, other_last, other);
          cand.push_back(std::move(y));
        }
      }
    }
  }

  const Instance& in_;
  const BuiltModel& built_;
  milp::LpEngine engine_;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t max_evaluations_;
  int n_;
  int per_day_;
  std::vector<int> others_;  // binaries outside the pattern, rounded after the LP
  std::vector<double> point_;
  std::uint64_t evaluations_ = 0;
};

Pattern pattern_of(const Schedule& s) {
  Pattern x(s.size(), kIdle);
  for (int t = 0; t < s.size(); ++t) {
    if (s.charge[t]) x[t] = kCharge;
    if (s.discharge[t]) x[t] = kDischarge;
  }
  return x;
}

Schedule slice(const Schedule& s, int first, int count) {
  Schedule out(count);
  for (int t = 0; t < count; ++t) {
    out.charge[t] = s.charge[first + t];
    out.discharge[t] = s.discharge[first + t];
    out.p_in[t] = s.p_in[first + t];
    out.p_out[t] = s.p_out[first + t];
    out.p_dn[t] = s.p_dn[first + t];
    out.p_up[t] = s.p_up[first + t];
    out.soc[t] = s.soc[first + t];
  }
  return out;
}

template <class Fn>
void for_each_array(const VarMap& v, Fn fn) {
  for (const auto* ids : {&v.p_in, &v.p_out, &v.p_dn, &v.p_up, &v.soc, &v.c, &v.d, &v.s_c,
                          &v.s_d, &v.b_c, &v.b_d, &v.u, &v.f3_aux, &v.f3_select}) {
    fn(*ids);
  }
}

// Best point the block search finds for `built`, or empty.
std::vector<double> search_start(const Instance& in, const BuiltModel& built,
                                 const milp::SolverConfig& config,
                                 std::optional<Clock::time_point> deadline,
                                 const std::vector<Schedule>& hints,
                                 std::uint64_t max_evaluations, SearchStats& stats) {
  const int n = in.horizon.total_steps();
  BlockSearch search(in, built, config, deadline, max_evaluations);
  Pattern best_x;
  double best = kInf;
  std::vector<double> start;
  auto consider = [&](const Pattern& x, const std::vector<int>* selector) {
    if (!search.admissible(x)) return;
    const double f = search.evaluate(x, selector);
    if (f < best) {
      best = f;
      best_x = x;
      start = search.point();
    }
  };
  std::vector<Schedule> starts = hints;
  try {
    starts.push_back(baseline_schedule(in));
  } catch (const ValidationError&) {
    // No recognizable peak and valley bands: no rule-based start.
  }
  for (const Schedule& hint : starts) {
    std::vector<int> selector(n);
    for (int t = 0; t < n; ++t) selector[t] = hint.p_up[t] > 0.0 ? 0 : 1;
    consider(pattern_of(hint), &selector);
    consider(pattern_of(hint), nullptr);
  }
  consider(search.from_relaxation(), nullptr);
  consider(Pattern(n, kIdle), nullptr);
  if (!best_x.empty()) {
    stats.start_objective += best;
    search.improve(best_x, best, start);
    stats.final_objective += best;
  }
  stats.evaluations += search.evaluations();
  return start;
}

// Rows tying the first step of a day model to the power the previous day
// ended with, when a block runs through midnight.
void hold_across_midnight(BuiltModel& day, const Instance& in, bool charging, double power) {
  const double pn = in.ess.rated_power_kw;
  const VarId p = charging ? day.vars.p_in[0] : day.vars.p_out[0];
  const VarId b = charging ? day.vars.c[0] : day.vars.d[0];
  day.model.add_constraint({{p, 1}, {b, pn}}, milp::Sense::LessEqual, pn + power,
                           charging ? "charge_hold_in.up" : "discharge_hold_in.up");
  day.model.add_constraint({{p, -1}, {b, pn}}, milp::Sense::LessEqual, pn - power,
                           charging ? "charge_hold_in.dn" : "discharge_hold_in.dn");
}

}  // namespace

Optimized optimize(const Instance& in, const OptimizeOptions& options) {
  options.solver.validate();
  in.validate();
  const auto t0 = Clock::now();
  BuiltModel built = build_model(in);
  const int n = in.horizon.total_steps();
  const int per_day = in.horizon.steps_per_day();
  const int days = in.horizon.days();
  for (const Schedule& hint : options.hints) {
    if (hint.size() != n) {
      throw ValidationError("hint schedule has " + std::to_string(hint.size()) +
                            " steps, expected " + std::to_string(n));
    }
  }

  milp::SolverConfig config = options.solver;
  Optimized out;
  std::vector<double> start;
  if (options.block_search) {
    std::optional<Clock::time_point> deadline;
    if (config.time_limit_seconds) {
      deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(
                          options.search_share * *config.time_limit_seconds));
    }
    if (days == 1) {
      start = search_start(in, built, config, deadline, options.hints, options.max_evaluations,
                           out.search);
    } else {
      // Days one after another, each from the SOC the previous one left.
      start.assign(built.model.num_variables(), 0.0);
      double soc = in.ess.soc_init;
      for (int day = 0; day < days && !start.empty(); ++day) {
        Instance di = day_instance(in, day, soc);
        di.flags.terminal_soc_equals_initial = false;
        BuiltModel bd = build_model(di);
        if (day + 1 == days && in.flags.terminal_soc_equals_initial) {
          bd.model.add_constraint({{bd.vars.soc[per_day - 1], 1}}, milp::Sense::Equal,
                                  in.ess.soc_init, "terminal_soc");
        }
        if (day > 0 && in.ess.constant_power_mode) {
          const int last = day * per_day - 1;
          if (start[built.vars.c[last].value] > 0.5) {
            hold_across_midnight(bd, di, true, start[built.vars.p_in[last].value]);
          } else if (start[built.vars.d[last].value] > 0.5) {
            hold_across_midnight(bd, di, false, start[built.vars.p_out[last].value]);
          }
        }
        std::vector<Schedule> hints;
        for (const Schedule& h : options.hints) hints.push_back(slice(h, day * per_day, per_day));
        std::vector<double> p = search_start(di, bd, config, deadline, hints,
                                             options.max_evaluations, out.search);
        if (p.empty()) {
          start.clear();
          break;
        }
        std::vector<std::vector<VarId>> full, part;
        for_each_array(built.vars, [&](const std::vector<VarId>& ids) { full.push_back(ids); });
        for_each_array(bd.vars, [&](const std::vector<VarId>& ids) { part.push_back(ids); });
        for (std::size_t a = 0; a < full.size(); ++a) {
          for (std::size_t t = 0; t < part[a].size(); ++t) {
            start[full[a][day * per_day + t].value] = p[part[a][t].value];
          }
        }
        soc = std::clamp(p[bd.vars.soc[per_day - 1].value], in.ess.soc_min, in.ess.soc_max);
      }
      // Hold flags across midnight, which no single day could see.
      if (!start.empty() && in.ess.constant_power_mode) {
        const VarMap& v = built.vars;
        for (int day = 1; day < days; ++day) {
          const int t = day * per_day - 1;
          start[v.b_c[t].value] = start[v.c[t].value] * start[v.c[t + 1].value];
          start[v.b_d[t].value] = start[v.d[t].value] * start[v.d[t + 1].value];
        }
      }
    }
    out.search.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  }

  if (config.time_limit_seconds) {
    const double used = std::chrono::duration<double>(Clock::now() - t0).count();
    config.time_limit_seconds =
        std::max(0.05 * *config.time_limit_seconds, *config.time_limit_seconds - used);
  }
  out.solution = milp::solve(built.model, config, start);
  out.solution.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (out.solution.has_values()) {
    out.schedule = extract_schedule(out.solution, built.vars, in);
    out.report = objective_components(out.schedule, in);
  }
  return out;
}

}  // namespace bess
