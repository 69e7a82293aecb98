#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "bess/error.hpp"
#include "bess/formulation.hpp"
#include "bess/optimize.hpp"

namespace bess::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kInfeasible = 3,
  kSolverLimit = 4,
};

/// Bad or missing configuration. The message starts with the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Format { Csv, Json };

/// Everything except the profiles, as read from a JSON document.
struct RunConfig {
  int days = 1;
  int steps_per_day = 96;
  std::optional<std::filesystem::path> profiles;  // resolved against the config file
  EssParams ess;
  GridParams grid;
  TouTariff tariff = default_tariff();
  FeedInPolicy feed_in;
  CarbonModel carbon;
  Weights weights;
  InstanceFlags flags;
  OptimizeOptions options = default_options();
  std::optional<std::filesystem::path> out;
  Format format = Format::Csv;

  /// Deterministic: a node budget and no clock.
  static OptimizeOptions default_options();
};

/// Parses a config document. Missing sections and fields keep their
/// defaults; unknown keys, wrong types and failed sub-validations throw
/// ConfigError naming the field. `base` resolves relative paths.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);

/// The default config as a JSON document.
std::string default_config_json();

/// Instance for the config's horizon and the given profiles. Throws
/// ConfigError when the profiles do not fit the horizon.
Instance make_run_instance(const RunConfig& config, const ProfilePair& profiles);

/// Full command line, argv[0] included. Reports go to files; progress and
/// diagnostics go to `out` and `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bess::cli
