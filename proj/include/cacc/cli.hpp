#pragma once

#include <string>

#include "cacc/config.hpp"

namespace cacc::cli {

/// Exit-code contract shared by all commands.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kDivergence = 3;
inline constexpr int kEmptyRegion = 4;

struct Options {
  std::string out_dir;  // overrides [output] dir when non-empty
  bool svg = false;     // forces SVG emission on
  std::string delay_mode;  // overrides [dregion] delay_mode when non-empty
};

/// simulate: trace.csv, metrics.csv, metrics.json, summary.json, optional
/// timeseries.svg and spider.svg. Divergence is recorded in summary.json and
/// reported through the exit code.
int run_simulate(const RunConfig& config, const Options& opts);

/// design: region.csv, region.json, optional region.svg, plus a gain report
/// for the configured (kp, kd) pair against the region.
int run_design(const RunConfig& config, const Options& opts);

/// compare: runs the scenario under two gain sets (configs must agree on
/// fleet and profile) and writes compare.json with per-vehicle metric deltas
/// and the convoy-max peak-jerk ratio.
int run_compare(const RunConfig& config_a, const RunConfig& config_b, const Options& opts);

/// metrics: analyzes an externally supplied trace CSV.
int run_metrics(const std::string& trace_path, const RunConfig& config, const Options& opts);

}  // namespace cacc::cli
