#include "bess/fixtures.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace bess {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform [0, 1) from the top 53 bits; mt19937_64 output is specified by the
// standard, distributions are not.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Keeps the CSV short and exactly representable: whole watts.
double round_watts(double kw) { return std::round(kw * 1000.0) / 1000.0; }

}  // namespace

ProfilePair synthetic_profiles(const SyntheticWeekOptions& o) {
  Horizon h(o.days, o.steps_per_day);
  std::mt19937_64 rng(o.seed);
  const int n = o.steps_per_day;
  std::vector<double> pv(h.total_steps()), load(h.total_steps());
  for (int day = 0; day < o.days; ++day) {
    const double clear = uniform(rng, 0.80, 1.00);
    const double base = o.load_mean_kw * uniform(rng, 0.97, 1.03);
    for (int k = 0; k < n; ++k) {
      const int t = day * n + k;
      const double hour = (k + 0.5) * 24.0 / n;
      // Daylight 06:00-20:00, symmetric about 13:00.
      double shape = std::cos(kPi * (hour - 13.0) / 14.0);
      double p = shape > 0.0 ? o.pv_peak_kw * clear * std::pow(shape, 1.5) : 0.0;
      if (p > 0.0) p *= uniform(rng, 0.96, 1.04);
      pv[t] = round_watts(std::max(p, 0.0));
      const double swing = 150.0 * std::sin(2.0 * kPi * (hour - 9.0) / 24.0);
      load[t] = round_watts(base + swing + uniform(rng, -60.0, 60.0));
    }
  }
  return ProfilePair{Profile(ProfileKind::Pv, std::move(pv), h),
                     Profile(ProfileKind::Load, std::move(load), h)};
}

}  // namespace bess
