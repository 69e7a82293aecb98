#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bess {

/// T days of N equal steps. Step t covers [t*dt, (t+1)*dt) hours of its day.
class Horizon {
 public:
  /// Throws ValidationError unless days >= 1 and N splits a day into whole
  /// minutes.
  Horizon(int days, int steps_per_day);

  int days() const noexcept { return days_; }
  int steps_per_day() const noexcept { return steps_; }
  int total_steps() const noexcept { return days_ * steps_; }
  double step_hours() const noexcept { return 24.0 / steps_; }
  int step_minutes() const noexcept { return 1440 / steps_; }

  /// Minutes after midnight at which `step` starts (within its own day).
  int start_minute(int step) const noexcept {
    return (step % steps_) * step_minutes();
  }
  int day_of(int step) const noexcept { return step / steps_; }

  friend bool operator==(const Horizon&, const Horizon&) = default;

 private:
  int days_;
  int steps_;
};

double step_hours(const Horizon& horizon) noexcept;

enum class ProfileKind { Pv, Load };

/// Period-average power (kW, >= 0) for every step of a horizon.
class Profile {
 public:
  /// Throws ValidationError on a length mismatch or a negative/non-finite value.
  Profile(ProfileKind kind, std::vector<double> values, Horizon horizon);

  ProfileKind kind() const noexcept { return kind_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const Horizon& horizon() const noexcept { return horizon_; }
  double operator[](int step) const { return values_[step]; }
  int size() const noexcept { return static_cast<int>(values_.size()); }

 private:
  ProfileKind kind_;
  std::vector<double> values_;
  Horizon horizon_;
};

struct ProfilePair {
  Profile pv;
  Profile load;
};

/// Parses `step,pv_kw,load_kw` CSV. Throws ParseError naming the data row
/// (its step index) and, where relevant, the field.
ProfilePair parse_profiles(std::string_view csv_text, const Horizon& horizon);

/// Inverse of parse_profiles; numbers round-trip exactly.
std::string write_profiles(const Profile& pv, const Profile& load);

/// The N steps of day `day_index` as a one-day profile.
Profile day_slice(const Profile& profile, int day_index);

}  // namespace bess
