#pragma once

#include <vector>

#include "bess/device.hpp"
#include "bess/milp/model.hpp"
#include "bess/milp/solution.hpp"
#include "bess/tariff.hpp"
#include "bess/timeseries.hpp"

namespace bess {

/// Weights of cost (F1), carbon (F2) and export-penalty (F3) objectives.
struct Weights {
  double alpha1 = 1.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;

  /// Throws ValidationError unless all are >= 0 and they sum to 1 (1e-9).
  void validate() const;
};

struct InstanceFlags {
  bool terminal_soc_equals_initial = false;
  /// Count only non-negative export surplus in F3.
  bool clamp_f3_nonnegative = false;
};

/// Everything needed to build one scheduling problem. Constant-power mode is
/// the ess.constant_power_mode field.
struct Instance {
  Horizon horizon;
  Profile pv;
  Profile load;
  EssParams ess;
  GridParams grid;
  TouTariff tariff = default_tariff();
  FeedInPolicy feed_in;
  CarbonModel carbon;
  Weights weights;
  InstanceFlags flags;

  /// Throws ValidationError on any invalid part or a horizon mismatch.
  void validate() const;
};

/// Instance with default device, tariff, carbon and feed-in data.
Instance make_instance(const Profile& pv, const Profile& load);

/// Day `day` of a multi-day instance as a one-day instance that starts from
/// `soc_init`. Flags carry over, so a terminal-SOC flag then applies to the
/// day alone. Throws ValidationError for a day out of range.
Instance day_instance(const Instance& instance, int day, double soc_init);

/// Model variable ids, one entry per step. b_c/b_d are empty when
/// constant-power mode is off; the last entry of each is fixed to 0 since it
/// would link past the horizon. f3_* are used by the clamped F3 variant only.
struct VarMap {
  std::vector<milp::VarId> p_in, p_out, p_dn, p_up, soc;
  std::vector<milp::VarId> c, d, s_c, s_d, b_c, b_d, u;
  std::vector<milp::VarId> f3_aux, f3_select;
};

struct BuiltModel {
  milp::Model model;
  VarMap vars;
};

BuiltModel build_model(const Instance& instance);

/// Extra binaries and rows restricting P_in and P_out to `levels` (kW, all
/// > 0): P = sum_k L_k z_k with C = sum_k z_k, and likewise for D.
void restrict_power_levels(BuiltModel& built, const std::vector<double>& levels);

/// Reads a schedule out of a solved model. Binary states are rounded; a
/// charge or discharge block whose power is negligible is turned into
/// standby, trimmed from its ends so no start is added; SOC is recomputed by
/// the recursion and grid flows by the power balance.
/// Throws SolverError if the solution carries no values.
Schedule extract_schedule(const milp::Solution& solution, const VarMap& vars,
                          const Instance& instance);

struct ObjectiveReport {
  double f1 = 0.0;  // $ energy cost net of export revenue
  double f2 = 0.0;  // $ carbon cost of imports
  double f3 = 0.0;  // $ export penalty
  double f = 0.0;   // weighted sum
};

double combine(const Weights& weights, double f1, double f2, double f3);

/// Evaluates the three objectives of `schedule` directly from their
/// definitions (F3 with the D-dependent export term).
ObjectiveReport objective_components(const Schedule& schedule, const Instance& instance);

}  // namespace bess
