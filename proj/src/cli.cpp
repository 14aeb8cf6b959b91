#include "cacc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cacc/svg.hpp"
#include "json.hpp"

namespace cacc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig with_overrides(RunConfig cfg, const Options& opts) {
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.svg) cfg.emit_svg = true;
  if (!opts.delay_mode.empty())
    cfg.delay_mode = design::delay_mode_from_string(opts.delay_mode);
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

json vehicle_summary(const ConvoyTrace& trace) {
  json arr = json::array();
  for (int i = 0; i < trace.n_vehicles(); ++i) {
    const auto& a = trace.vehicles[i].acceleration;
    double peak = 0.0;
    for (double v : a) peak = std::max(peak, std::abs(v));
    arr.push_back({{"vehicle", i},
                   {"peak_abs_accel", peak},
                   {"peak_jerk", peak_jerk(a, trace.dt)}});
  }
  return arr;
}

void require(bool present, const char* section) {
  if (!present)
    throw ConfigError(std::string("config is missing the required [") + section +
                      "] section");
}

double convoy_max_peak_jerk(const ConvoyTrace& trace) {
  double m = 0.0;
  for (const auto& ch : trace.vehicles)
    m = std::max(m, peak_jerk(ch.acceleration, trace.dt));
  return m;
}

}  // namespace

int run_simulate(const RunConfig& config_in, const Options& opts) {
  try {
    const RunConfig cfg = with_overrides(config_in, opts);
    require(cfg.has_scenario, "scenario");
    require(cfg.has_profile, "profile");
    fs::create_directories(cfg.out_dir);

    json summary;
    summary["divergence"] = nullptr;
    ConvoyTrace trace;
    try {
      trace = simulate(cfg.scenario);
    } catch (const DivergenceError& e) {
      summary["divergence"] = {{"vehicle", e.vehicle}, {"time", e.time},
                               {"message", e.what()}};
      write_file(fs::path(cfg.out_dir) / "summary.json", summary.dump(2));
      std::cerr << e.what() << "\n";
      return kDivergence;
    }

    std::ostringstream trace_csv;
    write_trace_csv(trace, trace_csv);
    write_file(fs::path(cfg.out_dir) / "trace.csv", trace_csv.str());

    const auto scores = spider_table(trace, cfg.normalization);
    std::ostringstream metrics_csv;
    write_metrics_csv(scores, metrics_csv);
    write_file(fs::path(cfg.out_dir) / "metrics.csv", metrics_csv.str());
    write_file(fs::path(cfg.out_dir) / "metrics.json", metrics_json(scores));

    summary["n_vehicles"] = cfg.scenario.n_vehicles;
    summary["t_end"] = cfg.scenario.t_end;
    summary["dt"] = cfg.scenario.dt;
    summary["headway"] = cfg.scenario.headway;
    summary["gains"] = {{"kp", cfg.scenario.gains.kp}, {"kd", cfg.scenario.gains.kd}};
    summary["vehicles"] = vehicle_summary(trace);
    summary["convoy_max_peak_jerk"] = convoy_max_peak_jerk(trace);
    write_file(fs::path(cfg.out_dir) / "summary.json", summary.dump(2));

    if (cfg.emit_svg) {
      write_file(fs::path(cfg.out_dir) / "timeseries.svg",
                 svg::timeseries(trace, "convoy time series"));
      write_file(fs::path(cfg.out_dir) / "spider.svg",
                 svg::spider(scores, "driveability scores"));
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  }
}

int run_design(const RunConfig& config_in, const Options& opts) {
  try {
    const RunConfig cfg = with_overrides(config_in, opts);
    require(cfg.has_dregion, "dregion");
    fs::create_directories(cfg.out_dir);

    design::LoopModel model{cfg.scenario.params, cfg.scenario.headway, cfg.delay_mode};
    const design::GainRegion region =
        design::assemble_region(cfg.dregion, model, cfg.design_resolution);

    std::ostringstream region_csv;
    design::write_region_csv(region, region_csv);
    write_file(fs::path(cfg.out_dir) / "region.csv", region_csv.str());
    write_file(fs::path(cfg.out_dir) / "region.json", design::region_json(region));

    json report;
    report["delay_mode"] = design::to_string(cfg.delay_mode);
    report["empty"] = region.empty;
    if (!region.empty) {
      const ControllerGains g = cfg.scenario.gains;
      const design::PoleCheck chk = design::certify(g, cfg.dregion, model, 0.01);
      json poles = json::array();
      for (const auto& p : chk.all_poles)
        poles.push_back({{"re", p.real()}, {"im", p.imag()}, {"abs", std::abs(p)}});
      report["gains"] = {{"kp", g.kp}, {"kd", g.kd}};
      report["gains_in_region"] = design::in_region(g, region);
      report["gains_in_region_tol"] = design::in_region_tol(g, region, 0.005);
      report["gains_pole_certificate"] = {{"pass", chk.pass},
                                          {"poles", poles},
                                          {"sigma_margin", chk.sigma_margin},
                                          {"zeta_margin", chk.zeta_margin},
                                          {"radius_margin", chk.radius_margin}};
      report["probe"] = {{"kp", region.probe.kp}, {"kd", region.probe.kd}};
    }
    write_file(fs::path(cfg.out_dir) / "design_report.json", report.dump(2));

    if (cfg.emit_svg)
      write_file(fs::path(cfg.out_dir) / "region.svg",
                 svg::region(region, {cfg.scenario.gains}, "feasible gain region"));

    if (region.empty) {
      std::cerr << "the configured pole region admits no feasible gains\n";
      return kEmptyRegion;
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  }
}

int run_compare(const RunConfig& config_a, const RunConfig& config_b, const Options& opts) {
  try {
    const RunConfig a = with_overrides(config_a, opts);
    const RunConfig b = config_b;
    require(a.has_scenario, "scenario");
    require(a.has_profile, "profile");
    require(b.has_scenario, "scenario");
    require(b.has_profile, "profile");

    // the two runs must describe the same fleet and profile
    RunConfig b_núcleo = b;
    b_núcleo.scenario.gains = a.scenario.gains;
    b_núcleo.out_dir = a.out_dir;
    b_núcleo.emit_svg = a.emit_svg;
    if (serialize_config(b_núcleo) != serialize_config(a))
      throw ConfigError("compare: configs must agree on fleet, profile and horizon "
                        "(only the gains may differ)");

    fs::create_directories(a.out_dir);
    const ConvoyTrace ta = simulate(a.scenario);
    const ConvoyTrace tb = simulate(b.scenario);
    const auto sa = spider_table(ta, a.normalization);
    const auto sb = spider_table(tb, a.normalization);

    for (const auto& [tag, trace, scores] :
         {std::tuple<const char*, const ConvoyTrace&,
                     const std::vector<DriveabilityScores>&>{"a", ta, sa},
          {"b", tb, sb}}) {
      fs::create_directories(fs::path(a.out_dir) / tag);
      std::ostringstream tc, mc;
      write_trace_csv(trace, tc);
      write_metrics_csv(scores, mc);
      write_file(fs::path(a.out_dir) / tag / "trace.csv", tc.str());
      write_file(fs::path(a.out_dir) / tag / "metrics.csv", mc.str());
    }

    json cmp;
    cmp["gains_a"] = {{"kp", a.scenario.gains.kp}, {"kd", a.scenario.gains.kd}};
    cmp["gains_b"] = {{"kp", b.scenario.gains.kp}, {"kd", b.scenario.gains.kd}};
    json deltas = json::array();
    for (std::size_t i = 0; i < sa.size(); ++i) {
      json d;
      d["vehicle"] = i;
      for (std::size_t m = 0; m < kMetricNames.size(); ++m)
        d[kMetricNames[m]] = sb[i].normalized[m] - sa[i].normalized[m];
      d["peak_jerk_a"] = sa[i].raw.peak_jerk;
      d["peak_jerk_b"] = sb[i].raw.peak_jerk;
      deltas.push_back(d);
    }
    cmp["per_vehicle_normalized_delta_b_minus_a"] = deltas;
    const double ja = convoy_max_peak_jerk(ta);
    const double jb = convoy_max_peak_jerk(tb);
    cmp["convoy_max_peak_jerk_a"] = ja;
    cmp["convoy_max_peak_jerk_b"] = jb;
    cmp["peak_jerk_ratio_a_over_b"] = ja / jb;
    write_file(fs::path(a.out_dir) / "compare.json", cmp.dump(2));
    return kOk;
  } catch (const DivergenceError& e) {
    std::cerr << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  }
}

int run_metrics(const std::string& trace_path, const RunConfig& config_in,
                const Options& opts) {
  try {
    const RunConfig cfg = with_overrides(config_in, opts);
    fs::create_directories(cfg.out_dir);
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open trace file: " + trace_path);
    const ConvoyTrace trace = read_trace_csv(in, trace_path);
    const auto scores = spider_table(trace, cfg.normalization);
    std::ostringstream mc;
    write_metrics_csv(scores, mc);
    write_file(fs::path(cfg.out_dir) / "metrics.csv", mc.str());
    write_file(fs::path(cfg.out_dir) / "metrics.json", metrics_json(scores));
    if (cfg.emit_svg)
      write_file(fs::path(cfg.out_dir) / "spider.svg",
                 svg::spider(scores, "driveability scores"));
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace cacc::cli
