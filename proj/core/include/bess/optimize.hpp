#pragma once

#include <cstdint>
#include <vector>

#include "bess/device.hpp"
#include "bess/formulation.hpp"
#include "bess/milp/solution.hpp"

namespace bess {

struct OptimizeOptions {
  milp::SolverConfig solver;
  /// Run a local search over charge/discharge block patterns first and hand
  /// its best point to branch-and-bound as the starting incumbent.
  bool block_search = true;
  /// Share of solver.time_limit_seconds the block search may use.
  double search_share = 0.6;
  /// Candidate patterns evaluated per search (per day on longer horizons).
  /// The search is deterministic when this, not the clock, ends it.
  std::uint64_t max_evaluations = 20000;
  /// Feasible schedules to start the search from (e.g. a baseline). The
  /// result is never worse than the best feasible hint.
  std::vector<Schedule> hints;
};

struct SearchStats {
  std::uint64_t evaluations = 0;
  double start_objective = 0.0;
  double final_objective = 0.0;
  double seconds = 0.0;
};

struct Optimized {
  milp::Solution solution;
  Schedule schedule;       // empty when the solve found no feasible point
  ObjectiveReport report;
  SearchStats search;
};

/// Builds the model of `instance`, searches block patterns, then runs
/// branch-and-bound from the best pattern found. The search also starts from
/// the rule-based baseline when the tariff has one. Multi-day horizons are
/// searched day by day (SOC carried over midnight) and the stitched point
/// seeds branch-and-bound on the whole horizon. Solver limits are reported
/// through solution.status; the schedule is extracted whenever a feasible
/// point exists.
Optimized optimize(const Instance& instance, const OptimizeOptions& options = {});

}  // namespace bess
