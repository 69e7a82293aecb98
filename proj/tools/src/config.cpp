#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bess/cli.hpp"
#include "bess/tariff.hpp"

namespace bess::cli {

namespace {

using nlohmann::json;

// Typed access to one JSON object; every key must be consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  void read(const char* key, T& into) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const json& v = j_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(key, "must be a boolean");
      into = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(key, "must be an integer");
      if (std::is_unsigned_v<T> && v.get<long long>() < 0) fail(key, "must be non-negative");
      into = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(key, "must be a number");
      into = v.get<T>();
    } else {
      if (!v.is_string()) fail(key, "must be a string");
      into = v.get<std::string>();
    }
  }

  const json& child(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  [[noreturn]] void fail(const char* key, const std::string& what) const {
    const std::string p = key[0] ? path(key) : path_;
    throw ConfigError((p.empty() ? std::string("config") : p) + " " + what);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key.c_str()) + " is not a known field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void checked(F&& validate) {
  try {
    validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

void read_horizon(Section s, RunConfig& c) {
  s.read("days", c.days);
  s.read("steps_per_day", c.steps_per_day);
  s.finish();
  checked([&] { Horizon(c.days, c.steps_per_day); });
}

void read_ess(Section s, EssParams& e) {
  s.read("capacity_kwh", e.capacity_kwh);
  s.read("rated_power_kw", e.rated_power_kw);
  s.read("soc_init", e.soc_init);
  s.read("soc_min", e.soc_min);
  s.read("soc_max", e.soc_max);
  s.read("eta_c", e.eta_c);
  s.read("eta_d", e.eta_d);
  s.read("max_starts", e.max_starts);
  s.read("constant_power_mode", e.constant_power_mode);
  s.finish();
  checked([&] { e.validate(); });
}

void read_tariff(Section s, RunConfig& c) {
  if (!s.has("bands")) {
    s.finish();
    return;
  }
  const json& bands = s.child("bands");
  if (!bands.is_array()) s.fail("bands", "must be an array");
  std::vector<TariffBand> out;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    Section b(bands[i], s.path("bands") + "[" + std::to_string(i) + "]");
    TariffBand band;
    b.read("start_hour", band.start_hour);
    b.read("end_hour", band.end_hour);
    b.read("price", band.price);
    b.finish();
    out.push_back(band);
  }
  s.finish();
  try {
    c.tariff = TouTariff(std::move(out));
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("tariff.bands ") + e.what());
  }
}

void read_feed_in(Section s, FeedInPolicy& f) {
  s.read("normal_rate", f.normal_rate);
  s.read("reop_rate", f.reop_rate);
  s.read("reop_start", f.reop_start);
  s.read("reop_end", f.reop_end);
  s.finish();
  checked([&] { f.validate(); });
}

void read_carbon(Section s, RunConfig& c) {
  CarbonModel& m = c.carbon;
  const bool city = s.has("city");
  if (city + s.has("factor") + s.has("series") > 1) {
    s.fail("", "takes only one of city, factor or series");
  }
  if (city) {
    std::string code;
    s.read("city", code);
    if (code.size() != 1) s.fail("city", "must be a single letter code");
    try {
      m.factor = carbon_factor(code[0]);
    } catch (const ValidationError& e) {
      s.fail("city", e.what());
    }
  }
  s.read("factor", m.factor);
  if (s.has("series")) {
    const json& v = s.child("series");
    if (!v.is_array()) s.fail("series", "must be an array");
    m.series.clear();
    for (const json& x : v) {
      if (!x.is_number()) s.fail("series", "must hold numbers");
      m.series.push_back(x.get<double>());
    }
  }
  s.read("sink_price", m.sink_price);
  s.finish();
}

void read_weights(Section s, Weights& w) {
  s.read("alpha1", w.alpha1);
  s.read("alpha2", w.alpha2);
  s.read("alpha3", w.alpha3);
  s.finish();
  try {
    w.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("weights ") + e.what());
  }
}

void read_solver(Section s, OptimizeOptions& o) {
  milp::SolverConfig& sc = o.solver;
  s.read("node_limit", sc.node_limit);
  s.read("relative_gap", sc.relative_gap);
  s.read("feasibility_tol", sc.feasibility_tol);
  s.read("integrality_tol", sc.integrality_tol);
  s.read("optimality_tol", sc.optimality_tol);
  s.read("iteration_limit", sc.iteration_limit);
  s.read("degenerate_threshold", sc.degenerate_threshold);
  if (s.has("time_limit_seconds")) {
    const json& v = s.child("time_limit_seconds");
    if (v.is_null()) {
      sc.time_limit_seconds.reset();
    } else if (v.is_number() && v.get<double>() > 0) {
      sc.time_limit_seconds = v.get<double>();
    } else {
      s.fail("time_limit_seconds", "must be a positive number or null");
    }
  }
  s.read("block_search", o.block_search);
  s.read("search_share", o.search_share);
  s.read("max_evaluations", o.max_evaluations);
  s.finish();
  if (!(o.search_share > 0 && o.search_share < 1)) s.fail("search_share", "must lie in (0, 1)");
  try {
    sc.validate();
  } catch (const ModelError& e) {
    throw ConfigError(std::string("solver ") + e.what());
  }
}

void read_flags(Section s, InstanceFlags& f) {
  s.read("terminal_soc_equals_initial", f.terminal_soc_equals_initial);
  s.read("clamp_f3_nonnegative", f.clamp_f3_nonnegative);
  s.finish();
}

void read_output(Section s, RunConfig& c, const std::filesystem::path& base) {
  std::string dir, format;
  s.read("dir", dir);
  s.read("format", format);
  s.finish();
  if (!dir.empty()) c.out = base / dir;
  if (format == "json") {
    c.format = Format::Json;
  } else if (!format.empty() && format != "csv") {
    s.fail("format", "must be csv or json");
  }
}

}  // namespace

OptimizeOptions RunConfig::default_options() {
  OptimizeOptions o;
  o.solver.node_limit = 50;
  o.solver.time_limit_seconds.reset();
  return o;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Section root(doc, "");
  if (root.has("horizon")) read_horizon(Section(root.child("horizon"), "horizon"), c);
  if (root.has("profiles")) {
    std::string p;
    root.read("profiles", p);
    c.profiles = base / p;
  }
  if (root.has("ess")) read_ess(Section(root.child("ess"), "ess"), c.ess);
  if (root.has("grid")) {
    Section g(root.child("grid"), "grid");
    g.read("transformer_kw", c.grid.transformer_kw);
    g.finish();
    checked([&] { c.grid.validate(); });
  }
  if (root.has("tariff")) read_tariff(Section(root.child("tariff"), "tariff"), c);
  if (root.has("feed_in")) read_feed_in(Section(root.child("feed_in"), "feed_in"), c.feed_in);
  if (root.has("carbon")) read_carbon(Section(root.child("carbon"), "carbon"), c);
  if (root.has("weights")) read_weights(Section(root.child("weights"), "weights"), c.weights);
  if (root.has("solver")) read_solver(Section(root.child("solver"), "solver"), c.options);
  if (root.has("flags")) read_flags(Section(root.child("flags"), "flags"), c.flags);
  if (root.has("output")) read_output(Section(root.child("output"), "output"), c, base);
  root.finish();
  checked([&] { c.carbon.validate(Horizon(c.days, c.steps_per_day)); });
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file " + path.string() + " cannot be read");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::string default_config_json() {
  const RunConfig c;
  json bands = json::array();
  for (const TariffBand& b : c.tariff.bands()) {
    bands.push_back({{"start_hour", b.start_hour}, {"end_hour", b.end_hour}, {"price", b.price}});
  }
  const json doc = {
      {"horizon", {{"days", c.days}, {"steps_per_day", c.steps_per_day}}},
      {"ess",
       {{"capacity_kwh", c.ess.capacity_kwh},
        {"rated_power_kw", c.ess.rated_power_kw},
        {"soc_init", c.ess.soc_init},
        {"soc_min", c.ess.soc_min},
        {"soc_max", c.ess.soc_max},
        {"eta_c", c.ess.eta_c},
        {"eta_d", c.ess.eta_d},
        {"max_starts", c.ess.max_starts},
        {"constant_power_mode", c.ess.constant_power_mode}}},
      {"grid", {{"transformer_kw", c.grid.transformer_kw}}},
      {"tariff", {{"bands", bands}}},
      {"feed_in",
       {{"normal_rate", c.feed_in.normal_rate},
        {"reop_rate", c.feed_in.reop_rate},
        {"reop_start", c.feed_in.reop_start},
        {"reop_end", c.feed_in.reop_end}}},
      {"carbon", {{"city", "A"}, {"sink_price", c.carbon.sink_price}}},
      {"weights",
       {{"alpha1", c.weights.alpha1}, {"alpha2", c.weights.alpha2}, {"alpha3", c.weights.alpha3}}},
      {"solver",
       {{"node_limit", c.options.solver.node_limit},
        {"relative_gap", c.options.solver.relative_gap},
        {"time_limit_seconds", nullptr},
        {"block_search", c.options.block_search},
        {"max_evaluations", c.options.max_evaluations}}},
      {"flags",
       {{"terminal_soc_equals_initial", c.flags.terminal_soc_equals_initial},
        {"clamp_f3_nonnegative", c.flags.clamp_f3_nonnegative}}},
  };
  return doc.dump(2) + "\n";
}

Instance make_run_instance(const RunConfig& c, const ProfilePair& profiles) {
  const Horizon horizon(c.days, c.steps_per_day);
  if (!(profiles.pv.horizon() == horizon)) {
    throw ConfigError("profiles do not match the configured horizon");
  }
  Instance in{horizon,  profiles.pv, profiles.load, c.ess,     c.grid,
              c.tariff, c.feed_in,   c.carbon,      c.weights, c.flags};
  checked([&] { in.validate(); });
  return in;
}

}  // namespace bess::cli
