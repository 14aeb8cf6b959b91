#include "cacc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace cacc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KeyValue {
  std::string value;
  int line;
  bool used = false;
};

using Section = std::map<std::string, KeyValue>;

std::map<std::string, Section> read_sections(const std::string& text,
                                             const std::string& name) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
    if (current.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    sections[current][key] = {trim(line.substr(eq + 1)), lineno};
  }
  return sections;
}

class Reader {
 public:
  Reader(Section* section, std::string name, std::string location)
      : section_(section), name_(std::move(name)), location_(std::move(location)) {}

  bool present() const { return section_ != nullptr; }

  std::string str(const std::string& key, const std::string& fallback) {
    auto* kv = find(key);
    return kv ? kv->value : fallback;
  }
  double num(const std::string& key, double fallback) {
    auto* kv = find(key);
    if (!kv) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(kv->value, &used);
      if (used != kv->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(location_ + ":" + std::to_string(kv->line) + ": [" + name_ + "] " +
                        key + " = '" + kv->value + "' is not a number");
    }
  }
  int integer(const std::string& key, int fallback) {
    const double v = num(key, fallback);
    if (v != std::floor(v))
      throw ConfigError("[" + name_ + "] " + key + " must be an integer");
    return static_cast<int>(v);
  }
  bool flag(const std::string& key, bool fallback) {
    auto* kv = find(key);
    if (!kv) return fallback;
    if (kv->value == "true" || kv->value == "1") return true;
    if (kv->value == "false" || kv->value == "0") return false;
    throw ConfigError("[" + name_ + "] " + key + " must be true or false");
  }
  bool has(const std::string& key) const {
    return section_ && section_->count(key) > 0;
  }

  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, kv] : *section_)
      if (!kv.used)
        throw ConfigError(location_ + ":" + std::to_string(kv.line) + ": unknown key '" +
                          key + "' in section [" + name_ + "]");
  }

 private:
  KeyValue* find(const std::string& key) {
    if (!section_) return nullptr;
    auto it = section_->find(key);
    if (it == section_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }
  Section* section_;
  std::string name_;
  std::string location_;
};

ProfileKind kind_from_string(const std::string& s) {
  if (s == "step") return ProfileKind::step;
  if (s == "ramp") return ProfileKind::ramp;
  if (s == "smooth") return ProfileKind::smooth;
  if (s == "trace") return ProfileKind::trace;
  throw ConfigError("unknown profile kind '" + s + "' (step|ramp|smooth|trace)");
}

const char* kind_to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::step: return "step";
    case ProfileKind::ramp: return "ramp";
    case ProfileKind::smooth: return "smooth";
    case ProfileKind::trace: return "trace";
  }
  return "?";
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const std::string& base_dir) {
  auto sections = read_sections(text, name);
  static const std::vector<std::string> known = {"scenario", "profile", "dregion",
                                                 "normalization", "output"};
  for (const auto& [sec, _] : sections)
    if (std::find(known.begin(), known.end(), sec) == known.end())
      throw ConfigError(name + ": unknown section [" + sec + "]");

  auto reader = [&](const char* sec) {
    auto it = sections.find(sec);
    return Reader(it == sections.end() ? nullptr : &it->second, sec, name);
  };

  RunConfig cfg;
  Reader sc = reader("scenario");
  cfg.has_scenario = sc.present();
  cfg.scenario.n_vehicles = sc.integer("n_vehicles", 5);
  cfg.scenario.params.length = sc.num("length", 10.0);
  cfg.scenario.params.standstill_gap = sc.num("standstill_gap", 10.0);
  cfg.scenario.params.lag_tau = sc.num("lag_tau", 0.5);
  cfg.scenario.params.delay_phi = sc.num("delay_phi", 0.1);
  cfg.scenario.gains.kp = sc.num("kp", 4.0);
  cfg.scenario.gains.kd = sc.num("kd", 2.0);
  cfg.scenario.headway = sc.num("headway", 0.6);
  cfg.scenario.kv_lead = sc.num("kv_lead", 2.0);
  const std::string lead = sc.str("lead_mode", "virtual");
  if (lead == "virtual") cfg.scenario.lead_mode = LeadMode::virtual_follower;
  else if (lead == "velocity") cfg.scenario.lead_mode = LeadMode::velocity_tracking;
  else throw ConfigError("lead_mode must be 'virtual' or 'velocity', got '" + lead + "'");
  cfg.scenario.dt = sc.num("dt", 0.01);
  cfg.scenario.t_end = sc.num("t_end", 80.0);
  const bool has_lo = sc.has("accel_clamp_min"), has_hi = sc.has("accel_clamp_max");
  if (has_lo != has_hi)
    throw ConfigError("accel_clamp_min and accel_clamp_max must be given together");
  if (has_lo)
    cfg.scenario.accel_clamp = {sc.num("accel_clamp_min", 0.0), sc.num("accel_clamp_max", 0.0)};
  sc.reject_unknown();

  Reader pr = reader("profile");
  cfg.has_profile = pr.present();
  cfg.profile_spec.kind = kind_from_string(pr.str("kind", "ramp"));
  cfg.profile_spec.v_max = pr.num("v_max", 15.6);
  cfg.profile_spec.distance = pr.num("distance", 720.0);
  cfg.profile_spec.accel_limit = pr.num("accel_limit", 3.0);
  cfg.profile_spec.decel_rate = pr.num("decel_rate", 1.12);
  cfg.profile_spec.rise_time = pr.num("rise_time", 10.0);
  cfg.profile_spec.fall_time = pr.num("fall_time", 18.2);
  cfg.profile_spec.trace_path = pr.str("trace_path", "");
  const std::string units = pr.str("trace_units", "mph");
  if (units == "mph") cfg.profile_spec.trace_units = SpeedUnits::mph;
  else if (units == "mps") cfg.profile_spec.trace_units = SpeedUnits::mps;
  else throw ConfigError("trace_units must be 'mph' or 'mps', got '" + units + "'");
  pr.reject_unknown();

  if (cfg.profile_spec.kind == ProfileKind::trace) {
    if (cfg.profile_spec.trace_path.empty())
      throw ConfigError(name + ": [profile] kind=trace requires trace_path");
    std::filesystem::path p(cfg.profile_spec.trace_path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    cfg.scenario.profile = load_speed_trace(p.string(), cfg.profile_spec.trace_units);
  } else {
    cfg.scenario.profile = cfg.profile_spec;
  }

  Reader dr = reader("dregion");
  cfg.has_dregion = dr.present();
  cfg.dregion.sigma = dr.num("sigma", 0.5);
  cfg.dregion.theta_deg = dr.num("theta", 30.0);
  cfg.dregion.omega_b = dr.num("omega_b", 20.0);
  cfg.delay_mode = design::delay_mode_from_string(dr.str("delay_mode", "exact"));
  cfg.design_resolution = dr.integer("resolution", 2000);
  dr.reject_unknown();

  Reader nm = reader("normalization");
  auto bound = [&](const char* metric, NormalizationTable::Bound& b) {
    b.best = nm.num(std::string(metric) + "_best", b.best);
    b.worst = nm.num(std::string(metric) + "_worst", b.worst);
  };
  bound("response_time", cfg.normalization.response_time);
  bound("bump", cfg.normalization.bump);
  bound("kick", cfg.normalization.kick);
  bound("stumble", cfg.normalization.stumble);
  bound("peak_jerk", cfg.normalization.peak_jerk);
  bound("vdv", cfg.normalization.vdv);
  nm.reject_unknown();
  cfg.normalization.validate();

  Reader out = reader("output");
  cfg.out_dir = out.str("dir", "out");
  cfg.emit_svg = out.flag("svg", false);
  out.reject_unknown();

  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path,
                           std::filesystem::path(path).parent_path().string());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "[scenario]\n";
  out << "n_vehicles = " << cfg.scenario.n_vehicles << "\n";
  out << "length = " << num(cfg.scenario.params.length) << "\n";
  out << "standstill_gap = " << num(cfg.scenario.params.standstill_gap) << "\n";
  out << "lag_tau = " << num(cfg.scenario.params.lag_tau) << "\n";
  out << "delay_phi = " << num(cfg.scenario.params.delay_phi) << "\n";
  out << "kp = " << num(cfg.scenario.gains.kp) << "\n";
  out << "kd = " << num(cfg.scenario.gains.kd) << "\n";
  out << "headway = " << num(cfg.scenario.headway) << "\n";
  out << "kv_lead = " << num(cfg.scenario.kv_lead) << "\n";
  out << "lead_mode = "
      << (cfg.scenario.lead_mode == LeadMode::virtual_follower ? "virtual" : "velocity")
      << "\n";
  out << "dt = " << num(cfg.scenario.dt) << "\n";
  out << "t_end = " << num(cfg.scenario.t_end) << "\n";
  if (cfg.scenario.accel_clamp) {
    out << "accel_clamp_min = " << num(cfg.scenario.accel_clamp->first) << "\n";
    out << "accel_clamp_max = " << num(cfg.scenario.accel_clamp->second) << "\n";
  }
  out << "\n[profile]\n";
  out << "kind = " << kind_to_string(cfg.profile_spec.kind) << "\n";
  out << "v_max = " << num(cfg.profile_spec.v_max) << "\n";
  out << "distance = " << num(cfg.profile_spec.distance) << "\n";
  out << "accel_limit = " << num(cfg.profile_spec.accel_limit) << "\n";
  out << "decel_rate = " << num(cfg.profile_spec.decel_rate) << "\n";
  out << "rise_time = " << num(cfg.profile_spec.rise_time) << "\n";
  out << "fall_time = " << num(cfg.profile_spec.fall_time) << "\n";
  out << "trace_path = " << cfg.profile_spec.trace_path << "\n";
  out << "trace_units = "
      << (cfg.profile_spec.trace_units == SpeedUnits::mph ? "mph" : "mps") << "\n";
  out << "\n[dregion]\n";
  out << "sigma = " << num(cfg.dregion.sigma) << "\n";
  out << "theta = " << num(cfg.dregion.theta_deg) << "\n";
  out << "omega_b = " << num(cfg.dregion.omega_b) << "\n";
  out << "delay_mode = " << design::to_string(cfg.delay_mode) << "\n";
  out << "resolution = " << cfg.design_resolution << "\n";
  out << "\n[normalization]\n";
  auto bound = [&](const char* metric, const NormalizationTable::Bound& b) {
    out << metric << "_best = " << num(b.best) << "\n";
    out << metric << "_worst = " << num(b.worst) << "\n";
  };
  bound("response_time", cfg.normalization.response_time);
  bound("bump", cfg.normalization.bump);
  bound("kick", cfg.normalization.kick);
  bound("stumble", cfg.normalization.stumble);
  bound("peak_jerk", cfg.normalization.peak_jerk);
  bound("vdv", cfg.normalization.vdv);
  out << "\n[output]\n";
  out << "dir = " << cfg.out_dir << "\n";
  out << "svg = " << (cfg.emit_svg ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace cacc
