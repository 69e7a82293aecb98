#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bess/timeseries.hpp"

namespace bess {

/// Battery parameters. Defaults are the 8 MWh / 4 MW user-A system.
struct EssParams {
  double capacity_kwh = 8000.0;
  double rated_power_kw = 4000.0;
  double soc_init = 0.05;
  double soc_min = 0.05;
  double soc_max = 0.95;
  double eta_c = 0.88;
  double eta_d = 0.90;
  int max_starts = 2;  // per day, for charging and for discharging
  bool constant_power_mode = true;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  static EssParams user_a() { return {}; }
  static EssParams user_b() {
    return {2000.0, 1000.0, 0.05, 0.05, 0.95, 0.85, 0.85, 2, true};
  }
};

struct GridParams {
  double transformer_kw = 12500.0;  // bound on import and on export

  void validate() const;
};

/// Per-step battery and grid decisions.
struct Schedule {
  std::vector<int> charge;     // C(t)
  std::vector<int> discharge;  // D(t)
  std::vector<double> p_in;    // kW into the battery
  std::vector<double> p_out;   // kW out of the battery
  std::vector<double> p_dn;    // kW imported from the grid
  std::vector<double> p_up;    // kW exported to the grid
  std::vector<double> soc;     // end-of-step state of charge

  explicit Schedule(int steps = 0)
      : charge(steps, 0), discharge(steps, 0), p_in(steps, 0.0),
        p_out(steps, 0.0), p_dn(steps, 0.0), p_up(steps, 0.0), soc(steps, 0.0) {}

  int size() const noexcept { return static_cast<int>(charge.size()); }
};

/// SOC at the end of each step by the efficiency-weighted energy recursion,
/// starting from soc_init. Throws ValidationError on a length mismatch.
std::vector<double> soc_trajectory(const EssParams& params, const Horizon& horizon,
                                   const std::vector<double>& p_in,
                                   const std::vector<double>& p_out,
                                   const std::vector<int>& charge,
                                   const std::vector<int>& discharge);

/// Number of 0 -> 1 transitions; `initial_prev` is the state before t = 0.
/// Throws ValidationError on a non-binary value.
int count_starts(const std::vector<int>& series, int initial_prev = 0);

/// count_starts restricted to each day, counters reset at midnight.
std::vector<int> count_starts_per_day(const std::vector<int>& series,
                                      const Horizon& horizon);

struct Violation {
  int step = -1;  // -1 for schedule-wide problems
  std::string rule;
  std::string detail;
};

std::string to_string(const Violation& v);

struct ValidationOptions {
  double tolerance = 1e-6;  // kW for powers, fraction for SOC
  bool terminal_soc_equals_initial = false;
};

/// Every broken operating rule of `schedule`. Rules: "state-exclusivity",
/// "binary", "power-bound", "soc-recursion", "soc-bound", "start-cap",
/// "constant-power", "exchange-bound", "exchange-complementarity",
/// "balance", "terminal-soc", "length".
std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         const EssParams& params,
                                         const GridParams& grid, const Profile& pv,
                                         const Profile& load,
                                         const ValidationOptions& options = {});

/// CSV with header step,C,D,p_in_kw,p_out_kw,p_dn_kw,p_up_kw,soc.
std::string write_schedule_csv(const Schedule& schedule);
/// Throws ParseError with the offending line.
Schedule parse_schedule_csv(std::string_view text);

}  // namespace bess
