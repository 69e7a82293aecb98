#include "bess/device.hpp"

#include <algorithm>
#include <cmath>

#include "bess/error.hpp"
#include "bess/text.hpp"

namespace bess {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ValidationError(std::string(field) + " " + what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void EssParams::validate() const {
  require(finite(capacity_kwh) && capacity_kwh > 0, "ess.capacity_kwh", "must be positive");
  require(finite(rated_power_kw) && rated_power_kw > 0, "ess.rated_power_kw",
          "must be positive");
  require(finite(soc_min) && soc_min >= 0 && soc_min <= 1, "ess.soc_min",
          "must lie in [0, 1]");
  require(finite(soc_max) && soc_max >= 0 && soc_max <= 1, "ess.soc_max",
          "must lie in [0, 1]");
  require(soc_min <= soc_max, "ess.soc_min", "must not exceed ess.soc_max");
  require(finite(soc_init) && soc_init >= soc_min && soc_init <= soc_max,
          "ess.soc_init", "must lie in [soc_min, soc_max]");
  require(finite(eta_c) && eta_c > 0 && eta_c <= 1, "ess.eta_c", "must lie in (0, 1]");
  require(finite(eta_d) && eta_d > 0 && eta_d <= 1, "ess.eta_d", "must lie in (0, 1]");
  require(max_starts >= 0, "ess.max_starts", "must be non-negative");
}

void GridParams::validate() const {
  require(finite(transformer_kw) && transformer_kw > 0, "grid.transformer_kw",
          "must be positive");
}

std::vector<double> soc_trajectory(const EssParams& params, const Horizon& horizon,
                                   const std::vector<double>& p_in,
                                   const std::vector<double>& p_out,
                                   const std::vector<int>& charge,
                                   const std::vector<int>& discharge) {
  const std::size_t n = static_cast<std::size_t>(horizon.total_steps());
  if (p_in.size() != n || p_out.size() != n || charge.size() != n ||
      discharge.size() != n) {
    throw ValidationError("soc_trajectory: series length must equal " +
                          std::to_string(n));
  }
  const double k = horizon.step_hours() / params.capacity_kwh;
  std::vector<double> soc(n);
  double s = params.soc_init;
  for (std::size_t t = 0; t < n; ++t) {
    s += (params.eta_c * charge[t] * p_in[t] - discharge[t] * p_out[t] / params.eta_d) * k;
    soc[t] = s;
  }
  return soc;
}

int count_starts(const std::vector<int>& series, int initial_prev) {
  if (initial_prev != 0 && initial_prev != 1) {
    throw ValidationError("count_starts: initial state must be 0 or 1");
  }
  int prev = initial_prev;
  int starts = 0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    int b = series[t];
    if (b != 0 && b != 1) {
      throw ValidationError("count_starts: non-binary value at index " +
                            std::to_string(t));
    }
    if (b == 1 && prev == 0) ++starts;
    prev = b;
  }
  return starts;
}

std::vector<int> count_starts_per_day(const std::vector<int>& series,
                                      const Horizon& horizon) {
  const int n = horizon.steps_per_day();
  std::vector<int> out;
  for (int d = 0; d < horizon.days(); ++d) {
    std::vector<int> day(series.begin() + d * n, series.begin() + (d + 1) * n);
    out.push_back(count_starts(day, 0));
  }
  return out;
}

std::string to_string(const Violation& v) {
  std::string out = v.rule;
  if (v.step >= 0) out += " at step " + std::to_string(v.step);
  if (!v.detail.empty()) out += ": " + v.detail;
  return out;
}

std::vector<Violation> validate_schedule(const Schedule& s, const EssParams& params,
                                         const GridParams& grid, const Profile& pv,
                                         const Profile& load,
                                         const ValidationOptions& options) {
  std::vector<Violation> out;
  const Horizon& h = pv.horizon();
  const int n = h.total_steps();
  const double tol = options.tolerance;
  auto add = [&](int step, const char* rule, std::string detail) {
    out.push_back({step, rule, std::move(detail)});
  };
  auto sized = [n](const auto& v) { return static_cast<int>(v.size()) == n; };
  if (!(load.horizon() == h) || !sized(s.charge) || !sized(s.discharge) ||
      !sized(s.p_in) || !sized(s.p_out) || !sized(s.p_dn) || !sized(s.p_up) ||
      !sized(s.soc)) {
    add(-1, "length", "every series must have " + std::to_string(n) + " steps");
    return out;
  }

  bool binaries_ok = true;
  const double pn = params.rated_power_kw;
  for (int t = 0; t < n; ++t) {
    int c = s.charge[t], d = s.discharge[t];
    if ((c != 0 && c != 1) || (d != 0 && d != 1)) {
      add(t, "binary", "C and D must be 0 or 1");
      binaries_ok = false;
      continue;
    }
    if (c + d > 1) add(t, "state-exclusivity", "C and D are both 1");
    if (s.p_in[t] < -tol || s.p_in[t] > pn * c + tol) {
      add(t, "power-bound", "p_in " + format_double(s.p_in[t]) + " outside [0, " +
                                format_double(pn * c) + "]");
    }
    if (s.p_out[t] < -tol || s.p_out[t] > pn * d + tol) {
      add(t, "power-bound", "p_out " + format_double(s.p_out[t]) + " outside [0, " +
                                format_double(pn * d) + "]");
    }
    const double pt = grid.transformer_kw;
    if (s.p_dn[t] < -tol || s.p_dn[t] > pt + tol || s.p_up[t] < -tol ||
        s.p_up[t] > pt + tol) {
      add(t, "exchange-bound", "grid flows must lie in [0, " + format_double(pt) + "]");
    }
    if (std::min(s.p_dn[t], s.p_up[t]) > tol) {
      add(t, "exchange-complementarity", "import and export both positive");
    }
    double residual = pv[t] + s.p_out[t] + s.p_dn[t] - s.p_up[t] - s.p_in[t] - load[t];
    if (std::abs(residual) > tol) {
      add(t, "balance", "residual " + format_double(residual) + " kW");
    }
    if (s.soc[t] < params.soc_min - tol || s.soc[t] > params.soc_max + tol) {
      add(t, "soc-bound", "soc " + format_double(s.soc[t]) + " outside [" +
                              format_double(params.soc_min) + ", " +
                              format_double(params.soc_max) + "]");
    }
  }
  if (!binaries_ok) return out;

  std::vector<double> soc =
      soc_trajectory(params, h, s.p_in, s.p_out, s.charge, s.discharge);
  for (int t = 0; t < n; ++t) {
    if (std::abs(soc[t] - s.soc[t]) > tol) {
      add(t, "soc-recursion", "stored " + format_double(s.soc[t]) + ", recomputed " +
                                  format_double(soc[t]));
    }
  }

  const int per_day = h.steps_per_day();
  auto c_starts = count_starts_per_day(s.charge, h);
  auto d_starts = count_starts_per_day(s.discharge, h);
  for (int day = 0; day < h.days(); ++day) {
    if (c_starts[day] > params.max_starts) {
      add(day * per_day, "start-cap",
          "day " + std::to_string(day) + " has " + std::to_string(c_starts[day]) +
              " charge starts, cap " + std::to_string(params.max_starts));
    }
    if (d_starts[day] > params.max_starts) {
      add(day * per_day, "start-cap",
          "day " + std::to_string(day) + " has " + std::to_string(d_starts[day]) +
              " discharge starts, cap " + std::to_string(params.max_starts));
    }
  }

  if (params.constant_power_mode) {
    for (int t = 1; t < n; ++t) {
      if (s.charge[t - 1] && s.charge[t] && std::abs(s.p_in[t] - s.p_in[t - 1]) > tol) {
        add(t, "constant-power", "charge power changes inside a block");
      }
      if (s.discharge[t - 1] && s.discharge[t] &&
          std::abs(s.p_out[t] - s.p_out[t - 1]) > tol) {
        add(t, "constant-power", "discharge power changes inside a block");
      }
    }
  }

  if (options.terminal_soc_equals_initial && n > 0 &&
      std::abs(s.soc[n - 1] - params.soc_init) > tol) {
    add(n - 1, "terminal-soc", "final soc differs from the initial value");
  }
  return out;
}

std::string write_schedule_csv(const Schedule& s) {
  std::string out = "step,C,D,p_in_kw,p_out_kw,p_dn_kw,p_up_kw,soc\n";
  for (int t = 0; t < s.size(); ++t) {
    out += std::to_string(t) + ',' + std::to_string(s.charge[t]) + ',' +
           std::to_string(s.discharge[t]) + ',' + format_double(s.p_in[t]) + ',' +
           format_double(s.p_out[t]) + ',' + format_double(s.p_dn[t]) + ',' +
           format_double(s.p_up[t]) + ',' + format_double(s.soc[t]) + '\n';
  }
  return out;
}

Schedule parse_schedule_csv(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "step,C,D,p_in_kw,p_out_kw,p_dn_kw,p_up_kw,soc") {
    throw ParseError("expected header 'step,C,D,p_in_kw,p_out_kw,p_dn_kw,p_up_kw,soc'",
                     1);
  }
  const int n = static_cast<int>(lines.size()) - 1;
  Schedule s(n);
  for (int row = 0; row < n; ++row) {
    const std::size_t line = static_cast<std::size_t>(row) + 2;
    auto cells = split_csv_line(lines[row + 1]);
    if (cells.size() != 8) throw ParseError("expected 8 fields", line);
    auto step = parse_integer(cells[0]);
    if (!step || *step != row) throw ParseError("step index out of order", line);
    auto c = parse_integer(cells[1]);
    auto d = parse_integer(cells[2]);
    if (!c || !d) throw ParseError("C and D must be integers", line);
    s.charge[row] = static_cast<int>(*c);
    s.discharge[row] = static_cast<int>(*d);
    std::vector<double>* cols[] = {&s.p_in, &s.p_out, &s.p_dn, &s.p_up, &s.soc};
    for (int k = 0; k < 5; ++k) {
      auto v = parse_double(cells[3 + k]);
      if (!v || !std::isfinite(*v)) throw ParseError("malformed number", line);
      (*cols[k])[row] = *v;
    }
  }
  return s;
}

}  // namespace bess
