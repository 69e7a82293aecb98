#include "bess/tariff.hpp"

#include <algorithm>
#include <cmath>

#include "bess/error.hpp"

namespace bess {

namespace {

void check_step(const Horizon& horizon, int step) {
  if (step < 0 || step >= horizon.total_steps()) {
    throw ValidationError("step " + std::to_string(step) + " out of range [0, " +
                          std::to_string(horizon.total_steps()) + ")");
  }
}

double start_hour(const Horizon& horizon, int step) {
  return horizon.start_minute(step) / 60.0;
}

}  // namespace

TouTariff::TouTariff(std::vector<TariffBand> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw ValidationError("tariff needs at least one band");
  for (const TariffBand& b : bands_) {
    if (!(b.start_hour < b.end_hour)) {
      throw ValidationError("tariff band must have start_hour < end_hour");
    }
    if (!std::isfinite(b.price) || b.price < 0.0) {
      throw ValidationError("tariff prices must be finite and non-negative");
    }
  }
  sorted_ = bands_;
  std::sort(sorted_.begin(), sorted_.end(),
            [](const TariffBand& a, const TariffBand& b) { return a.start_hour < b.start_hour; });
  double cursor = 0.0;
  for (const TariffBand& b : sorted_) {
    if (b.start_hour != cursor) {
      throw ValidationError(b.start_hour > cursor ? "tariff bands leave a gap"
                                                  : "tariff bands overlap");
    }
    cursor = b.end_hour;
  }
  if (cursor != 24.0) throw ValidationError("tariff bands must end at 24:00");
}

double TouTariff::price_at_hour(double hour) const {
  for (const TariffBand& b : sorted_) {
    if (hour >= b.start_hour && hour < b.end_hour) return b.price;
  }
  throw ValidationError("clock hour outside [0, 24)");
}

TouTariff default_tariff() {
  return TouTariff({{0, 8, 0.2501},
                    {8, 11, 1.0276},
                    {11, 17, 0.5976},
                    {17, 22, 1.0276},
                    {22, 24, 0.5976}});
}

double price_at(const TouTariff& tariff, const Horizon& horizon, int step) {
  check_step(horizon, step);
  return tariff.price_at_hour(start_hour(horizon, step));
}

void FeedInPolicy::validate() const {
  if (!std::isfinite(normal_rate) || !std::isfinite(reop_rate)) {
    throw ValidationError("feed_in rates must be finite");
  }
  if (!(0.0 <= reop_start && reop_start <= reop_end && reop_end <= 24.0)) {
    throw ValidationError("feed_in window must satisfy 0 <= start <= end <= 24");
  }
}

double feed_in_factor_at(const FeedInPolicy& policy, const Horizon& horizon, int step) {
  check_step(horizon, step);
  double h = start_hour(horizon, step);
  return (h >= policy.reop_start && h <= policy.reop_end) ? policy.reop_rate
                                                          : policy.normal_rate;
}

void CarbonModel::validate(const Horizon& horizon) const {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw ValidationError("carbon factor must be non-negative");
  }
  if (!std::isfinite(sink_price) || sink_price < 0.0) {
    throw ValidationError("carbon sink_price must be non-negative");
  }
  if (!series.empty()) {
    if (static_cast<int>(series.size()) != horizon.total_steps()) {
      throw ValidationError("carbon series has " + std::to_string(series.size()) +
                            " values, horizon needs " +
                            std::to_string(horizon.total_steps()));
    }
    for (double v : series) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("carbon series values must be non-negative");
      }
    }
  }
}

double carbon_factor(char city_code) {
  switch (city_code) {
    case 'A': return 0.642;
    case 'B': return 0.677;
    case 'C': return 0.689;
    case 'D': return 0.653;
    case 'E': return 0.631;
    case 'F': return 0.623;
    case 'G': return 0.171;
    case 'H': return 0.336;
    case 'J': return 0.417;
    case 'K': return 0.658;
    case 'L': return 0.723;
    case 'M': return 0.563;
    case 'N': return 0.590;
    default: break;
  }
  throw ValidationError(std::string("unknown city code '") + city_code + "'");
}

}  // namespace bess
