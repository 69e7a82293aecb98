#include "bess/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bess/error.hpp"
#include "bess/text.hpp"

namespace bess {

namespace {

struct Window {
  bool charge;
  double start_hour;
  double end_hour;
};

void check_bands(const Instance& in) {
  const TouTariff& tariff = in.tariff;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const TariffBand& b : tariff.bands()) {
    lo = std::min(lo, b.price);
    hi = std::max(hi, b.price);
  }
  bool ok = lo < hi;
  // Sample every step start of a day.
  const int n = in.horizon.steps_per_day();
  for (int t = 0; t < n && ok; ++t) {
    const double h = t * in.horizon.step_hours();
    const double p = tariff.price_at_hour(h);
    if (h < 8.0) ok = p == lo;
    if ((h >= 8.0 && h < 11.0) || (h >= 17.0 && h < 22.0)) ok = ok && p == hi;
  }
  if (!ok) {
    throw ValidationError("tariff has no valley on [0,8) with peaks on [8,11) and [17,22)");
  }
}

}  // namespace

Schedule baseline_schedule(const Instance& in) {
  in.validate();
  check_bands(in);
  const EssParams& ess = in.ess;
  const int n = in.horizon.total_steps();
  const int per_day = in.horizon.steps_per_day();
  const double dt = in.horizon.step_hours();
  const double pt = in.grid.transformer_kw;

  std::vector<Window> windows;
  if (ess.max_starts >= 2) {
    windows = {{true, 0, 8}, {false, 8, 11}, {true, 11, 17}, {false, 17, 22}};
  } else if (ess.max_starts == 1) {
    windows = {{true, 0, 8}, {false, 17, 22}};
  }
  const double floor =
      in.flags.terminal_soc_equals_initial ? std::max(ess.soc_min, ess.soc_init) : ess.soc_min;

  Schedule s(n);
  double soc = ess.soc_init;
  for (int day = 0; day < in.horizon.days(); ++day) {
    for (const Window& w : windows) {
      const int a = day * per_day + static_cast<int>(std::lround(w.start_hour / dt));
      const int b = day * per_day + static_cast<int>(std::lround(w.end_hour / dt));
      const double hours = (b - a) * dt;
      double power = ess.rated_power_kw;
      for (int t = a; t < b; ++t) {
        const double net = in.load[t] - in.pv[t];
        power = std::min(power, w.charge ? pt - net : pt + net);
      }
      const double energy = w.charge ? ess.capacity_kwh * (ess.soc_max - soc) / ess.eta_c
                                     : ess.capacity_kwh * (soc - floor) * ess.eta_d;
      power = std::min(power, energy / hours);
      if (!(power > 1e-9)) continue;
      for (int t = a; t < b; ++t) {
        if (w.charge) {
          s.charge[t] = 1;
          s.p_in[t] = power;
        } else {
          s.discharge[t] = 1;
          s.p_out[t] = power;
        }
      }
      soc += w.charge ? ess.eta_c * power * hours / ess.capacity_kwh
                      : -power * hours / (ess.eta_d * ess.capacity_kwh);
      soc = std::clamp(soc, ess.soc_min, ess.soc_max);
    }
  }
  s.soc = soc_trajectory(ess, in.horizon, s.p_in, s.p_out, s.charge, s.discharge);
  for (int t = 0; t < n; ++t) {
    const double x = in.load[t] - in.pv[t] + s.p_in[t] - s.p_out[t];
    s.p_dn[t] = std::max(x, 0.0);
    s.p_up[t] = std::max(-x, 0.0);
  }
  return s;
}

double BillComparison::average_reduction_percent() const {
  if (days.empty()) return 0.0;
  double sum = 0.0;
  for (const DayBill& d : days) sum += d.reduction_percent;
  return sum / static_cast<double>(days.size());
}

BillComparison bill_comparison(const Instance& in, const OptimizeOptions& options) {
  in.validate();
  BillComparison out;
  for (int day = 0; day < in.horizon.days(); ++day) {
    Instance di = day_instance(in, day, in.ess.soc_init);
    di.weights = {1.0, 0.0, 0.0};
    const Schedule base = baseline_schedule(di);
    Optimized r = optimize(di, options);
    if (r.schedule.size() == 0) {
      throw SolverError("day " + std::to_string(day) + ": no feasible schedule found (" +
                        std::string(milp::to_string(r.solution.status)) + ")");
    }
    DayBill bill;
    bill.baseline_cost = objective_components(base, di).f1;
    bill.optimized_cost = r.report.f1;
    bill.schedule = std::move(r.schedule);
    if (bill.baseline_cost > 0.0) {
      bill.reduction_percent =
          100.0 * (bill.baseline_cost - bill.optimized_cost) / bill.baseline_cost;
    }
    out.days.push_back(bill);
  }
  return out;
}

std::vector<Weights> permutation_weights() {
  return {{0.7, 0.1, 0.2}, {0.7, 0.2, 0.1}, {0.2, 0.7, 0.1},
          {0.1, 0.7, 0.2}, {0.1, 0.2, 0.7}, {0.2, 0.1, 0.7}};
}

std::vector<WeightRow> weight_sweep(const Instance& in, const std::vector<Weights>& sets,
                                    const OptimizeOptions& options) {
  std::vector<WeightRow> rows;
  std::vector<Schedule> schedules;
  for (const Weights& w : sets) {
    WeightRow row;
    row.weights = w;
    Schedule sched;
    try {
      w.validate();
      Instance wi = in;
      wi.weights = w;
      Optimized r = optimize(wi, options);
      row.status = r.solution.status;
      if (r.schedule.size() > 0) {
        row.report = r.report;
        sched = std::move(r.schedule);
      } else {
        row.error = "no feasible schedule (" + std::string(milp::to_string(row.status)) + ")";
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.schedule = sched;
    rows.push_back(row);
    schedules.push_back(std::move(sched));
  }

  // Every schedule is feasible for every row, so each row may take the best.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].error.empty()) continue;
    Instance wi = in;
    wi.weights = rows[i].weights;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == i || schedules[j].size() == 0) continue;
      const ObjectiveReport rep = objective_components(schedules[j], wi);
      if (rep.f < rows[i].report.f - 1e-9 * std::max(1.0, std::abs(rows[i].report.f))) {
        rows[i].report = rep;
        rows[i].schedule = schedules[j];
      }
    }
  }
  return rows;
}

std::vector<ReopWindow> centered_windows(double center_hour, double step_hours, int count) {
  std::vector<ReopWindow> out;
  for (int k = 1; k <= count; ++k) {
    out.push_back({center_hour - k * step_hours, center_hour + k * step_hours});
  }
  return out;
}

ReopSweepResult reop_window_sweep(const Instance& in, const std::vector<ReopWindow>& windows,
                                  double penalty, const OptimizeOptions& options) {
  if (windows.empty()) throw ValidationError("REOP sweep needs at least one window");
  in.validate();
  ReopSweepResult out;
  out.windows = windows;
  const int days = in.horizon.days();
  const double dt = in.horizon.step_hours();
  out.histogram_percent.assign(windows.size(), 0.0);
  for (int day = 0; day < days; ++day) {
    std::vector<double> row;
    std::vector<Schedule> day_schedules;
    for (const ReopWindow& w : windows) {
      Instance di = day_instance(in, day, in.ess.soc_init);
      di.weights = {0.0, 0.0, 1.0};
      di.feed_in.normal_rate = 0.0;
      di.feed_in.reop_rate = penalty;
      di.feed_in.reop_start = w.start_hour;
      di.feed_in.reop_end = w.end_hour;
      Optimized r = optimize(di, options);
      if (r.schedule.size() == 0) {
        throw SolverError("day " + std::to_string(day) + ": no feasible schedule found (" +
                          std::string(milp::to_string(r.solution.status)) + ")");
      }
      double kwh = 0.0;
      for (double p : r.schedule.p_up) kwh += p * dt;
      row.push_back(kwh);
      day_schedules.push_back(std::move(r.schedule));
    }
    int best = 0;
    for (int k = 1; k < static_cast<int>(row.size()); ++k) {
      if (row[k] < row[best] - 1e-6 * std::max(1.0, std::abs(row[best]))) best = k;
    }
    out.export_kwh.push_back(row);
    out.schedules.push_back(std::move(day_schedules));
    out.best_window.push_back(best);
    out.histogram_percent[best] += 100.0 / days;
  }
  return out;
}

std::string write_bill_csv(const BillComparison& bills) {
  std::string out = "day,baseline_cost,optimized_cost,reduction_percent\n";
  for (std::size_t d = 0; d < bills.days.size(); ++d) {
    const DayBill& b = bills.days[d];
    out += std::to_string(d) + "," + format_fixed(b.baseline_cost, 4) + "," +
           format_fixed(b.optimized_cost, 4) + "," + format_fixed(b.reduction_percent, 4) + "\n";
  }
  return out;
}

std::string write_weight_csv(const std::vector<WeightRow>& rows) {
  // Objective columns in units of 10^4 $.
  std::string out = "alpha1,alpha2,alpha3,F1,F2,F3,F,status\n";
  for (const WeightRow& r : rows) {
    out += format_double(r.weights.alpha1) + "," + format_double(r.weights.alpha2) + "," +
           format_double(r.weights.alpha3) + ",";
    if (r.error.empty()) {
      for (double v : {r.report.f1, r.report.f2, r.report.f3, r.report.f}) {
        out += format_fixed(v * 1e-4, 6) + ",";
      }
      out += std::string(milp::to_string(r.status));
    } else {
      out += ",,,,error";
    }
    out += "\n";
  }
  return out;
}

namespace {

std::string clock(double hour) {
  const int minutes = static_cast<int>(std::lround(hour * 60.0));
  std::string hh = std::to_string(minutes / 60);
  std::string mm = std::to_string(minutes % 60);
  if (hh.size() < 2) hh = "0" + hh;
  if (mm.size() < 2) mm = "0" + mm;
  return hh + ":" + mm;
}

}  // namespace

std::string write_reop_csv(const ReopSweepResult& r) {
  std::string out = "day";
  for (const ReopWindow& w : r.windows) {
    out += "," + clock(w.start_hour) + "-" + clock(w.end_hour);
  }
  out += ",best_window\n";
  for (std::size_t d = 0; d < r.export_kwh.size(); ++d) {
    out += std::to_string(d);
    for (double v : r.export_kwh[d]) out += "," + format_fixed(v, 3);
    out += "," + std::to_string(r.best_window[d]) + "\n";
  }
  out += "share_percent";
  for (double v : r.histogram_percent) out += "," + format_fixed(v, 4);
  out += ",\n";
  return out;
}

}  // namespace bess
