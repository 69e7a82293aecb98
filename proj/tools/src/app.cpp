#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bess/cli.hpp"
#include "bess/fixtures.hpp"
#include "bess/milp/lp_format.hpp"
#include "bess/strategy.hpp"
#include "bess/text.hpp"

namespace bess::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Args {
  std::string config;
  std::string profiles;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit;
  std::string schedule;
  std::optional<int> day;
  bool compare = false;
  double penalty = 0.2703;
  int windows = 12;
  double center = 13.0;
  double window_step = 0.25;
};

// A command failed in a way that maps to a specific exit code.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string(what) + " file " + path.string() + " cannot be read");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct Context {
  RunConfig config;
  Instance instance;
  fs::path out;
  Format format = Format::Csv;
};

Context prepare(const Args& a) {
  RunConfig config = a.config.empty() ? RunConfig{} : load_config(a.config);
  if (a.time_limit) {
    if (!(*a.time_limit > 0)) throw ConfigError("--time-limit must be positive");
    config.options.solver.time_limit_seconds = *a.time_limit;
  }
  const Horizon horizon(config.days, config.steps_per_day);
  std::optional<ProfilePair> profiles;
  std::optional<fs::path> path;
  if (!a.profiles.empty()) path = a.profiles;
  else if (config.profiles) path = config.profiles;
  if (path) {
    profiles.emplace(parse_profiles(read_file(*path, "profiles"), horizon));
  } else {
    SyntheticWeekOptions w;
    if (a.seed) w.seed = *a.seed;
    w.days = horizon.days();
    w.steps_per_day = horizon.steps_per_day();
    profiles.emplace(synthetic_profiles(w));
  }
  Context ctx{config, make_run_instance(config, *profiles), {}, config.format};
  if (!a.out.empty()) ctx.out = a.out;
  else if (config.out) ctx.out = *config.out;
  else ctx.out = ".";
  if (a.format == "json") ctx.format = Format::Json;
  else if (a.format == "csv") ctx.format = Format::Csv;
  return ctx;
}

void write_file(const fs::path& path, const std::string& text, std::ostream& log) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  f.close();
  if (!f) throw Error("cannot write " + path.string());
  log << "wrote " << path.string() << "\n";
}

json report_json(const ObjectiveReport& r) {
  return {{"F1", r.f1}, {"F2", r.f2}, {"F3", r.f3}, {"F", r.f}};
}

json weights_json(const Weights& w) {
  return {{"alpha1", w.alpha1}, {"alpha2", w.alpha2}, {"alpha3", w.alpha3}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int solve_failure_code(milp::Status status) {
  return status == milp::Status::Infeasible ? kInfeasible : kSolverLimit;
}

int cmd_optimize(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  const Optimized r = optimize(ctx.instance, ctx.config.options);
  const milp::Solution& s = r.solution;
  if (r.schedule.size() == 0) {
    throw Failure{solve_failure_code(s.status),
                  std::string("no feasible schedule: ") + std::string(milp::to_string(s.status))};
  }
  json j = {{"status", milp::to_string(s.status)},
            {"weights", weights_json(ctx.instance.weights)},
            {"objective", report_json(r.report)},
            {"model_objective", s.objective_value},
            {"bound", s.bound},
            {"gap", s.gap},
            {"nodes", s.stats.nodes}};
  write_file(ctx.out / "schedule.csv", write_schedule_csv(r.schedule), log);
  write_file(ctx.out / "objective.json", dump(j), log);
  log << "status " << milp::to_string(s.status) << ", F = " << format_double(r.report.f) << "\n";
  return kOk;
}

std::string bills_json(const BillComparison& b) {
  json days = json::array();
  for (const DayBill& d : b.days) {
    days.push_back({{"baseline_cost", d.baseline_cost},
                    {"optimized_cost", d.optimized_cost},
                    {"reduction_percent", d.reduction_percent}});
  }
  return dump({{"days", days}, {"average_reduction_percent", b.average_reduction_percent()}});
}

int cmd_baseline(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  const Schedule s = baseline_schedule(ctx.instance);
  const json j = {{"strategy", "baseline"},
                  {"weights", weights_json(ctx.instance.weights)},
                  {"objective", report_json(objective_components(s, ctx.instance))}};
  write_file(ctx.out / "schedule.csv", write_schedule_csv(s), log);
  write_file(ctx.out / "objective.json", dump(j), log);
  if (a.compare) {
    const BillComparison b = bill_comparison(ctx.instance, ctx.config.options);
    if (ctx.format == Format::Json) write_file(ctx.out / "bills.json", bills_json(b), log);
    else write_file(ctx.out / "bills.csv", write_bill_csv(b), log);
    log << "average reduction " << format_fixed(b.average_reduction_percent(), 4) << " %\n";
  }
  return kOk;
}

int cmd_sweep_weights(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  Instance in = ctx.instance;
  if (a.day) in = day_instance(ctx.instance, *a.day, ctx.instance.ess.soc_init);
  const std::vector<WeightRow> rows = weight_sweep(in, permutation_weights(), ctx.config.options);
  if (ctx.format == Format::Json) {
    json out = json::array();
    for (const WeightRow& r : rows) {
      json row = {{"weights", weights_json(r.weights)}, {"status", milp::to_string(r.status)}};
      if (r.error.empty()) row["objective"] = report_json(r.report);
      else row["error"] = r.error;
      out.push_back(row);
    }
    write_file(ctx.out / "weights.json", dump(out), log);
  } else {
    write_file(ctx.out / "weights.csv", write_weight_csv(rows), log);
  }
  for (const WeightRow& r : rows) {
    if (!r.error.empty()) throw Failure{solve_failure_code(r.status), r.error};
  }
  return kOk;
}

int cmd_sweep_reop(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  if (a.windows < 1) throw ConfigError("--windows must be at least 1");
  const ReopSweepResult r = reop_window_sweep(
      ctx.instance, centered_windows(a.center, a.window_step, a.windows), a.penalty,
      ctx.config.options);
  if (ctx.format == Format::Json) {
    json windows = json::array();
    for (std::size_t k = 0; k < r.windows.size(); ++k) {
      windows.push_back({{"start_hour", r.windows[k].start_hour},
                         {"end_hour", r.windows[k].end_hour},
                         {"share_percent", r.histogram_percent[k]}});
    }
    write_file(ctx.out / "reop.json",
               dump({{"windows", windows},
                     {"export_kwh", r.export_kwh},
                     {"best_window", r.best_window}}),
               log);
  } else {
    write_file(ctx.out / "reop.csv", write_reop_csv(r), log);
  }
  return kOk;
}

int cmd_validate(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  const Schedule s = parse_schedule_csv(read_file(a.schedule, "schedule"));
  const Instance& in = ctx.instance;
  ValidationOptions opts;
  opts.terminal_soc_equals_initial = in.flags.terminal_soc_equals_initial;
  const std::vector<Violation> v = validate_schedule(s, in.ess, in.grid, in.pv, in.load, opts);
  std::string text;
  if (ctx.format == Format::Json) {
    json list = json::array();
    for (const Violation& x : v) {
      list.push_back({{"step", x.step}, {"rule", x.rule}, {"detail", x.detail}});
    }
    text = dump(list);
  } else {
    text = "step,rule,detail\n";
    for (const Violation& x : v) {
      text += std::to_string(x.step) + "," + x.rule + ",\"" + x.detail + "\"\n";
    }
  }
  if (a.out.empty()) log << text;
  else write_file(ctx.out / (ctx.format == Format::Json ? "violations.json" : "violations.csv"),
                  text, log);
  log << v.size() << " violation(s)\n";
  return v.empty() ? kOk : kInfeasible;
}

int cmd_export_lp(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  const BuiltModel built = build_model(ctx.instance);
  write_file(ctx.out / "model.lp", milp::write_lp(built.model), log);
  return kOk;
}

int cmd_profiles(const Args& a, std::ostream& log) {
  Context ctx = prepare(a);
  write_file(ctx.out / "profiles.csv", write_profiles(ctx.instance.pv, ctx.instance.load), log);
  return kOk;
}

int cmd_default_config(const Args& a, std::ostream& log) {
  if (a.out.empty()) log << default_config_json();
  else write_file(fs::path(a.out) / "config.json", default_config_json(), log);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Day-ahead battery storage scheduling"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", a.config, "JSON run configuration")->check(CLI::ExistingFile);
    c->add_option("--profiles", a.profiles, "step,pv_kw,load_kw CSV")->check(CLI::ExistingFile);
    c->add_option("--out", a.out, "output directory");
    c->add_option("--format", a.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--seed", a.seed, "seed of the synthetic profiles used without --profiles");
    c->add_option("--time-limit", a.time_limit, "wall-clock budget in seconds (not reproducible)");
  };

  using Command = int (*)(const Args&, std::ostream&);
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* c = app.add_subcommand(name, help);
    common(c);
    commands.emplace_back(c, fn);
    return c;
  };

  add("optimize", "optimize the schedule; writes schedule.csv and objective.json", cmd_optimize);
  add("baseline", "rule-based peak-valley schedule", cmd_baseline)
      ->add_flag("--compare", a.compare, "also compare daily bills with the optimum");
  add("sweep-weights", "optimize under the six weight permutations", cmd_sweep_weights)
      ->add_option("--day", a.day, "restrict to one day of the horizon");
  CLI::App* reop = add("sweep-reop", "export under widening penalty windows", cmd_sweep_reop);
  reop->add_option("--penalty", a.penalty, "penalty in $/kWh of window export");
  reop->add_option("--windows", a.windows, "number of windows");
  reop->add_option("--center", a.center, "window centre, clock hours");
  reop->add_option("--step", a.window_step, "half-width increment, hours");
  add("validate", "check a schedule against the operating rules", cmd_validate)
      ->add_option("--schedule", a.schedule, "schedule CSV")
      ->required()
      ->check(CLI::ExistingFile);
  add("export-lp", "write the model as an LP file", cmd_export_lp);
  add("profiles", "write the profiles in use (synthetic unless --profiles)", cmd_profiles);
  CLI::App* defaults = app.add_subcommand("default-config", "print the default configuration");
  defaults->add_option("--out", a.out, "output directory");
  commands.emplace_back(defaults, cmd_default_config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  try {
    for (const auto& [c, fn] : commands) {
      if (c->parsed()) return fn(a, out);
    }
    return kInternal;
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverLimit;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace bess::cli
