#pragma once

#include <cstdint>

#include "bess/timeseries.hpp"

namespace bess {

struct SyntheticWeekOptions {
  std::uint64_t seed = 20241217;
  int days = 7;
  int steps_per_day = 96;
  double pv_peak_kw = 8000.0;   // clear-sky peak at 13:00
  double load_mean_kw = 3500.0;
};

/// Deterministic synthetic PV/load pair: bell-shaped PV centred on 13:00
/// with a per-day cloud factor, and a near-flat load with a mild daily swing.
/// Identical options give bit-identical profiles on every platform.
ProfilePair synthetic_profiles(const SyntheticWeekOptions& options = {});

}  // namespace bess
