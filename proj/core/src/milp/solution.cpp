#include "bess/milp/solution.hpp"

#include <cmath>

#include "bess/error.hpp"

namespace bess::milp {

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::NodeLimit: return "NodeLimit";
    case Status::GapLimit: return "GapLimit";
  }
  return "Unknown";
}

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ModelError(std::string(name) + " must be a positive finite number");
    }
  };
  positive(feasibility_tol, "feasibility_tol");
  positive(integrality_tol, "integrality_tol");
  positive(optimality_tol, "optimality_tol");
  if (!(relative_gap >= 0.0) || !std::isfinite(relative_gap)) {
    throw ModelError("relative_gap must be a non-negative finite number");
  }
  if (time_limit_seconds && !(*time_limit_seconds > 0.0)) {
    throw ModelError("time_limit_seconds must be positive");
  }
  if (node_limit == 0) throw ModelError("node_limit must be positive");
  if (degenerate_threshold == 0) {
    throw ModelError("degenerate_threshold must be positive");
  }
}

}  // namespace bess::milp
