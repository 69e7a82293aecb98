#include "bess/timeseries.hpp"

#include <cmath>

#include "bess/error.hpp"
#include "bess/text.hpp"

namespace bess {

Horizon::Horizon(int days, int steps_per_day) : days_(days), steps_(steps_per_day) {
  if (days < 1) throw ValidationError("horizon days must be at least 1");
  if (steps_per_day < 1 || 1440 % steps_per_day != 0) {
    throw ValidationError("steps_per_day must divide a day into whole minutes, got " +
                          std::to_string(steps_per_day));
  }
}

double step_hours(const Horizon& horizon) noexcept { return horizon.step_hours(); }

Profile::Profile(ProfileKind kind, std::vector<double> values, Horizon horizon)
    : kind_(kind), values_(std::move(values)), horizon_(horizon) {
  if (static_cast<int>(values_.size()) != horizon_.total_steps()) {
    throw ValidationError("profile has " + std::to_string(values_.size()) +
                          " values, horizon needs " +
                          std::to_string(horizon_.total_steps()));
  }
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t]) || values_[t] < 0.0) {
      throw ValidationError("profile value at step " + std::to_string(t) +
                            " must be finite and non-negative");
    }
  }
}

ProfilePair parse_profiles(std::string_view csv_text, const Horizon& horizon) {
  std::vector<std::string_view> lines = split_lines(csv_text);
  // Blank trailing lines are tolerated, blank lines inside are not.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "step,pv_kw,load_kw") {
    throw ParseError("expected header 'step,pv_kw,load_kw'", 1);
  }
  const int expected = horizon.total_steps();
  const int got = static_cast<int>(lines.size()) - 1;
  if (got != expected) {
    throw ParseError("expected " + std::to_string(expected) + " rows, got " +
                         std::to_string(got),
                     lines.size());
  }
  std::vector<double> pv(expected), load(expected);
  static constexpr const char* kFields[] = {"step", "pv_kw", "load_kw"};
  for (int row = 0; row < expected; ++row) {
    const std::size_t line = static_cast<std::size_t>(row) + 2;
    auto where = [&](const std::string& what) {
      return "row " + std::to_string(row) + ": " + what;
    };
    std::vector<std::string_view> cells = split_csv_line(lines[row + 1]);
    if (cells.size() != 3) {
      throw ParseError(where("expected 3 fields, got " + std::to_string(cells.size())),
                       line);
    }
    auto step = parse_integer(cells[0]);
    if (!step) throw ParseError(where("field step is not an integer"), line);
    if (*step != row) {
      throw ParseError(where("step index " + std::to_string(*step) +
                             " out of order, expected " + std::to_string(row)),
                       line);
    }
    double values[2];
    for (int f = 1; f <= 2; ++f) {
      auto v = parse_double(cells[f]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(where(std::string("field ") + kFields[f] + " is not a number"),
                         line);
      }
      if (*v < 0.0) {
        throw ParseError(where(std::string("field ") + kFields[f] +
                               " must be non-negative"),
                         line);
      }
      values[f - 1] = *v;
    }
    pv[row] = values[0];
    load[row] = values[1];
  }
  return ProfilePair{Profile(ProfileKind::Pv, std::move(pv), horizon),
                     Profile(ProfileKind::Load, std::move(load), horizon)};
}

std::string write_profiles(const Profile& pv, const Profile& load) {
  if (!(pv.horizon() == load.horizon())) {
    throw ValidationError("pv and load profiles use different horizons");
  }
  std::string out = "step,pv_kw,load_kw\n";
  for (int t = 0; t < pv.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += format_double(pv[t]);
    out += ',';
    out += format_double(load[t]);
    out += '\n';
  }
  return out;
}

Profile day_slice(const Profile& profile, int day_index) {
  const Horizon& h = profile.horizon();
  if (day_index < 0 || day_index >= h.days()) {
    throw ValidationError("day index " + std::to_string(day_index) +
                          " out of range [0, " + std::to_string(h.days()) + ")");
  }
  const int n = h.steps_per_day();
  auto first = profile.values().begin() + static_cast<std::ptrdiff_t>(day_index) * n;
  return Profile(profile.kind(), std::vector<double>(first, first + n),
                 Horizon(1, n));
}

}  // namespace bess
