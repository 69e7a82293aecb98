#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace bess::milp {

enum class Status : std::uint8_t {
  Optimal,
  Infeasible,
  NodeLimit,  // node budget exhausted before the gap closed
  GapLimit,   // time budget exhausted before the gap closed
};

std::string_view to_string(Status status) noexcept;

enum class LpMethod : std::uint8_t { Dual, Primal };

struct SolverConfig {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  /// Search stops when (incumbent - bound) <= relative_gap * max(1, |incumbent|).
  double relative_gap = 1e-6;
  std::uint64_t node_limit = 1'000'000;
  std::optional<double> time_limit_seconds;

  // Branch-and-bound policy: most-fractional branching (ties to the lowest
  // id) and best-bound node selection (ties to creation order). Before the
  // first incumbent is known the search plunges depth-first, rounding side
  // first, unless this is switched off.
  bool plunge_until_incumbent = true;

  LpMethod lp_method = LpMethod::Dual;
  double optimality_tol = 1e-7;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::uint32_t degenerate_threshold = 50;
  bool scaling = true;
  /// Textbook ratio test instead of the Harris two-pass test.
  bool textbook_ratio_test = false;
  std::uint64_t iteration_limit = 5'000'000;

  /// Throws ModelError if a tolerance is not strictly positive.
  void validate() const;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t simplex_iterations = 0;
  std::uint64_t lp_solves = 0;
  std::uint64_t bland_switches = 0;
  double wall_seconds = 0.0;
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> values;  // empty when no feasible point is known
  double objective_value = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  SolveStats stats;

  bool has_values() const noexcept { return !values.empty(); }
};

}  // namespace bess::milp
