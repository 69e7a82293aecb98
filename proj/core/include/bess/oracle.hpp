#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bess/device.hpp"
#include "bess/formulation.hpp"
#include "bess/milp/solution.hpp"

namespace bess {

/// An instance whose battery may only run at the listed power levels.
struct DiscretizedInstance {
  Instance instance;
  std::vector<double> power_levels;  // kW, sorted, within [0, rated], containing 0

  /// Throws ValidationError on a bad level list or instance.
  void validate() const;
};

struct OracleResult {
  Schedule schedule;
  double objective = 0.0;
  std::uint64_t sequences = 0;  // complete feasible sequences visited
};

/// Largest enumeration brute_force_optimal accepts.
inline constexpr double kMaxOracleSequences = 1e8;

/// Number of mode sequences that respect the start caps and, with
/// constant-power mode, keep one level per block. This is what
/// brute_force_optimal enumerates before SOC and exchange checks.
double sequence_count(const DiscretizedInstance& dinst);

/// Exhaustive minimum of the weighted objective over per-step modes
/// {standby, charge at level, discharge at level}. SOC comes from the
/// recursion and grid flows from the balance; prefixes that break a SOC,
/// exchange, start-cap or constant-power rule are cut. Throws ValidationError
/// when sequence_count exceeds kMaxOracleSequences, SolverError when no
/// sequence is feasible.
OracleResult brute_force_optimal(const DiscretizedInstance& dinst);

struct CertifyReport {
  double oracle_objective = 0.0;
  double restricted_objective = 0.0;  // MILP with powers limited to the levels
  double continuous_objective = 0.0;  // the unrestricted MILP
  milp::Status restricted_status = milp::Status::Infeasible;
  milp::Status continuous_status = milp::Status::Infeasible;
  Schedule restricted_schedule;  // empty when that solve found nothing
  Schedule continuous_schedule;
  std::vector<Violation> violations;  // of all three schedules
  bool passed = false;
  std::string detail;  // what diverged, empty when passed
};

/// Solves the restricted and the continuous MILP and compares them with the
/// oracle: restricted = oracle and continuous <= oracle, both within
/// `tolerance`, and every schedule valid.
CertifyReport certify(const DiscretizedInstance& dinst, const milp::SolverConfig& config,
                      double tolerance = 1e-6);

/// Seeded random one-day instance of `steps` steps with levels
/// {0, P/2, P}, for certification runs.
DiscretizedInstance random_oracle_instance(std::uint64_t seed, int steps = 12);

}  // namespace bess
