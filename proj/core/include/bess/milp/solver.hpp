#pragma once

#include <vector>

#include "bess/milp/model.hpp"
#include "bess/milp/solution.hpp"

namespace bess::milp {

/// Branch-and-bound over the binaries of `model`.
///
/// Each node re-optimizes with the dual simplex from its parent's basis.
/// Branching picks the most fractional binary (lowest id on ties); the open
/// node with the smallest bound is processed next (creation order on ties).
/// The search is single-threaded and deterministic for a fixed model and
/// config.
///
/// Throws ModelError for unbounded variables, SolverError on numerical
/// breakdown. Limits are reported through Solution::status.
Solution solve(const Model& model, const SolverConfig& config = {});

/// As above, starting from a known point: if `start` is integral and
/// feasible within the configured tolerances it becomes the first incumbent
/// (after re-optimizing the continuous part), otherwise it is ignored.
/// Throws ModelError if `start` is non-empty and of the wrong size.
Solution solve(const Model& model, const SolverConfig& config,
               const std::vector<double>& start);

}  // namespace bess::milp
