#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bess/formulation.hpp"
#include "bess/optimize.hpp"

namespace bess {

/// Rule-based two-cycle day: charge through the valley [0,8) toward soc_max,
/// discharge through the morning peak [8,11) toward soc_min, recharge in the
/// flat [11,17), discharge through the evening peak [17,22). Each block runs
/// at the constant power that just spans its window, capped by the rated
/// power and the transformer; with a start cap of 1 only the valley charge
/// and the evening discharge are kept. Days are chained through the SOC.
/// Throws ValidationError if the tariff has no valley on [0,8) and peaks on
/// [8,11) and [17,22).
Schedule baseline_schedule(const Instance& instance);

struct DayBill {
  double baseline_cost = 0.0;   // $, F1 of the baseline
  double optimized_cost = 0.0;  // $, F1 of the optimized day
  double reduction_percent = 0.0;
  Schedule schedule;  // the optimized day
};

struct BillComparison {
  std::vector<DayBill> days;
  double average_reduction_percent() const;
};

/// Per day (each from the instance's soc_init): baseline F1 against the
/// cost-only optimum, which starts from the baseline so it is never worse.
/// A zero baseline reports a reduction of 0.
BillComparison bill_comparison(const Instance& instance, const OptimizeOptions& options = {});

struct WeightRow {
  Weights weights;
  ObjectiveReport report;
  Schedule schedule;  // the schedule `report` evaluates
  milp::Status status = milp::Status::Infeasible;
  std::string error;  // non-empty when the row's solve failed
};

/// One optimization per weight set, rows in input order. After all rows are
/// solved each row also tries the other rows' schedules under its own
/// weights and keeps whichever is better.
std::vector<WeightRow> weight_sweep(const Instance& instance, const std::vector<Weights>& sets,
                                    const OptimizeOptions& options = {});

/// The six orderings of (0.1, 0.2, 0.7) in the order of the published table.
std::vector<Weights> permutation_weights();

struct ReopWindow {
  double start_hour = 0.0;
  double end_hour = 0.0;
};

struct ReopSweepResult {
  std::vector<ReopWindow> windows;
  std::vector<std::vector<double>> export_kwh;  // [day][window]
  std::vector<int> best_window;                 // per day, earliest on ties
  std::vector<double> histogram_percent;        // per window, share of days
  std::vector<std::vector<Schedule>> schedules;  // [day][window]
};

/// For every day and window, the export-only objective with non-window
/// export at 0 and window export at `penalty` $/kWh, reporting the exported
/// energy of the optimized day. Throws ValidationError for an empty list.
ReopSweepResult reop_window_sweep(const Instance& instance, const std::vector<ReopWindow>& windows,
                                  double penalty = 0.2703, const OptimizeOptions& options = {});

/// Windows [c - k*step, c + k*step] for k = 1..count.
std::vector<ReopWindow> centered_windows(double center_hour = 13.0, double step_hours = 0.25,
                                         int count = 12);

/// CSV renderings.
std::string write_bill_csv(const BillComparison& bills);
std::string write_weight_csv(const std::vector<WeightRow>& rows);
std::string write_reop_csv(const ReopSweepResult& result);

}  // namespace bess
