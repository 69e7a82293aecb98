#pragma once

#include <vector>

#include "bess/timeseries.hpp"

namespace bess {

/// Price band over clock hours [start_hour, end_hour).
struct TariffBand {
  double start_hour = 0.0;
  double end_hour = 0.0;
  double price = 0.0;  // $/kWh
};

/// Time-of-use energy tariff. Bands partition the day.
class TouTariff {
 public:
  /// Throws ValidationError unless the bands cover [0, 24) with no gap or
  /// overlap and every price is finite and non-negative.
  explicit TouTariff(std::vector<TariffBand> bands);

  const std::vector<TariffBand>& bands() const noexcept { return bands_; }
  /// Price of the band containing clock time `hour` (0 <= hour < 24).
  double price_at_hour(double hour) const;

 private:
  std::vector<TariffBand> bands_;  // as given
  std::vector<TariffBand> sorted_;
};

/// Peak 1.0276 on [8,11) and [17,22), flat 0.5976 on [11,17) and [22,24),
/// valley 0.2501 on [0,8).
TouTariff default_tariff();

/// Price at the start time of `step`. Throws ValidationError out of range.
double price_at(const TouTariff& tariff, const Horizon& horizon, int step);

/// Export pricing: `reop_rate` inside the closed clock window
/// [reop_start, reop_end], `normal_rate` elsewhere.
struct FeedInPolicy {
  double normal_rate = 0.391;
  double reop_rate = -0.2703;
  double reop_start = 11.0;
  double reop_end = 15.0;

  void validate() const;
};

double feed_in_factor_at(const FeedInPolicy& policy, const Horizon& horizon, int step);

/// Grid carbon intensity and its price. A per-step series, when present,
/// overrides the constant factor.
struct CarbonModel {
  double factor = 0.642;  // kgCO2/kWh, city A
  std::vector<double> series;
  double sink_price = 0.103;  // $/kgCO2

  /// Throws ValidationError on negative values or a series of the wrong length.
  void validate(const Horizon& horizon) const;
  double factor_at(int step) const {
    return series.empty() ? factor : series[static_cast<std::size_t>(step)];
  }
};

/// Average grid carbon factor of a prefecture-level city, by code A..N
/// (no I). Throws ValidationError for an unknown code.
double carbon_factor(char city_code);

}  // namespace bess
