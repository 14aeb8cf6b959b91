#pragma once

#include <string>

#include "cacc/convoy.hpp"
#include "cacc/design.hpp"
#include "cacc/metrics.hpp"

namespace cacc {

/// Everything a run needs, parsed from a flat key-value config with
/// [scenario], [profile], [dregion], [normalization] and [output] sections.
/// Every key has a documented default; unknown sections or keys are rejected.
struct RunConfig {
  Scenario scenario;           // profile filled in from the [profile] section
  ProfileSpec profile_spec;    // as configured (kind=trace keeps the path)
  design::DRegionSpec dregion;
  design::DelayMode delay_mode = design::DelayMode::exact;
  int design_resolution = 2000;
  NormalizationTable normalization;
  std::string out_dir = "out";
  bool emit_svg = false;

  bool has_scenario = false;  // section presence, for per-command requirements
  bool has_profile = false;
  bool has_dregion = false;
};

/// Parses a config file. Relative trace paths resolve against the config
/// file's directory. Throws ConfigError on unknown keys, bad values, or
/// unreadable files.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const std::string& base_dir);

/// Canonical serialization: every section and key in fixed order, so
/// parse(serialize(parse(x))) == parse(x).
std::string serialize_config(const RunConfig& config);

}  // namespace cacc
