#include "cacc/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cacc {

void ProfileSpec::validate() const {
  if (kind == ProfileKind::trace) {
    if (trace_path.empty()) throw ConfigError("trace profile requires trace_path");
    return;
  }
  if (!(v_max > 0.0)) throw ConfigError("profile v_max must be > 0");
  if (!(distance > 0.0)) throw ConfigError("profile distance must be > 0");
  if (kind == ProfileKind::ramp) {
    if (!(accel_limit > 0.0)) throw ConfigError("profile accel_limit must be > 0");
    if (!(decel_rate > 0.0)) throw ConfigError("profile decel_rate must be > 0");
  }
  if (kind == ProfileKind::smooth) {
    if (!(rise_time > 0.0)) throw ConfigError("profile rise_time must be > 0");
    if (!(fall_time > 0.0)) throw ConfigError("profile fall_time must be > 0");
  }
}

namespace {

struct Phases {
  double t_rise, t_cruise, t_fall;  // durations
};

// Solves the cruise duration so that rise + cruise + fall covers exactly
// spec.distance, throwing when rise+fall alone are too long.
Phases solve_phases(const ProfileSpec& spec) {
  double t_rise = 0.0, t_fall = 0.0, d_rise = 0.0, d_fall = 0.0;
  switch (spec.kind) {
    case ProfileKind::step:
      return {0.0, spec.distance / spec.v_max, 0.0};
    case ProfileKind::ramp:
      t_rise = spec.v_max / spec.accel_limit;
      t_fall = spec.v_max / spec.decel_rate;
      d_rise = 0.5 * spec.v_max * t_rise;
      d_fall = 0.5 * spec.v_max * t_fall;
      break;
    case ProfileKind::smooth:
      // cubic ease v = v_max*(3u^2 - 2u^3) covers v_max*T/2 over its span
      t_rise = spec.rise_time;
      t_fall = spec.fall_time;
      d_rise = 0.5 * spec.v_max * t_rise;
      d_fall = 0.5 * spec.v_max * t_fall;
      break;
    case ProfileKind::trace:
      throw ConfigError("trace profiles have no analytic phases");
  }
  const double d_min = d_rise + d_fall;
  if (d_min > spec.distance) {
    std::ostringstream os;
    os << "profile distance " << spec.distance << " m is too short for the rise and fall"
       << " phases; minimum feasible distance is " << d_min << " m";
    throw ConfigError(os.str());
  }
  return {t_rise, (spec.distance - d_min) / spec.v_max, t_fall};
}

}  // namespace

double profile_duration(const ProfileSpec& spec) {
  spec.validate();
  const Phases ph = solve_phases(spec);
  return ph.t_rise + ph.t_cruise + ph.t_fall;
}

ProfileSample sample_profile(const ProfileSpec& spec, double t) {
  spec.validate();
  if (t < 0.0) throw ConfigError("sample_profile: t must be >= 0");
  const Phases ph = solve_phases(spec);
  const double t1 = ph.t_rise;
  const double t2 = ph.t_rise + ph.t_cruise;
  const double t3 = t2 + ph.t_fall;

  switch (spec.kind) {
    case ProfileKind::step:
      // instantaneous jumps carry no representable acceleration
      if (t > 0.0 && t < t3) return {spec.v_max, 0.0};
      return {0.0, 0.0};
    case ProfileKind::ramp:
      if (t <= 0.0) return {0.0, 0.0};
      if (t < t1) return {spec.accel_limit * t, spec.accel_limit};
      if (t < t2) return {spec.v_max, 0.0};
      if (t < t3) return {spec.v_max - spec.decel_rate * (t - t2), -spec.decel_rate};
      return {0.0, 0.0};
    case ProfileKind::smooth: {
      if (t <= 0.0) return {0.0, 0.0};
      if (t < t1) {
        const double u = t / ph.t_rise;
        return {spec.v_max * (3.0 * u * u - 2.0 * u * u * u),
                spec.v_max * 6.0 * (u - u * u) / ph.t_rise};
      }
      if (t < t2) return {spec.v_max, 0.0};
      if (t < t3) {
        const double u = (t - t2) / ph.t_fall;
        return {spec.v_max * (1.0 - 3.0 * u * u + 2.0 * u * u * u),
                -spec.v_max * 6.0 * (u - u * u) / ph.t_fall};
      }
      return {0.0, 0.0};
    }
    case ProfileKind::trace:
      throw ConfigError("sample_profile: trace kind must be sampled via sample_trace");
  }
  return {0.0, 0.0};
}

void SpeedTrace::validate() const {
  if (times.size() != speeds.size())
    throw ConfigError("speed trace: times and speeds length mismatch");
  if (times.size() < 2) throw ConfigError("speed trace needs at least 2 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(speeds[i]))
      throw ConfigError("speed trace: non-finite entry at row " + std::to_string(i));
    if (speeds[i] < 0.0)
      throw ConfigError("speed trace: negative speed at row " + std::to_string(i));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ConfigError("speed trace: time not strictly increasing at row " +
                        std::to_string(i));
  }
}

SpeedTrace parse_speed_trace(std::istream& in, SpeedUnits units, const std::string& name) {
  SpeedTrace trace;
  std::string line;
  int lineno = 0;
  const double factor = units == SpeedUnits::mph ? kMphToMps : 1.0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments and whitespace-only lines
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::string cleaned;
    for (char c : line) cleaned += (c == ',' || c == ';' || c == '\t') ? ' ' : c;
    std::istringstream row(cleaned);
    double t, v;
    if (!(row >> t)) {
      if (cleaned.find_first_not_of(" \r") == std::string::npos) continue;
      // allow one non-numeric header row
      if (trace.times.empty() && lineno <= 16) continue;
      throw ParseError(name + ":" + std::to_string(lineno) + ": malformed row");
    }
    if (!(row >> v))
      throw ParseError(name + ":" + std::to_string(lineno) + ": missing speed column");
    trace.times.push_back(t);
    trace.speeds.push_back(v * factor);
  }
  if (trace.times.empty()) throw ParseError(name + ": no data rows");
  trace.validate();
  return trace;
}

SpeedTrace load_speed_trace(const std::string& path, SpeedUnits units) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open speed trace file: " + path);
  return parse_speed_trace(in, units, path);
}

ProfileSample sample_trace(const SpeedTrace& trace, double t) {
  trace.validate();
  if (t < trace.t_first() || t > trace.t_last()) {
    std::ostringstream os;
    os << "sample_trace: t=" << t << " outside [" << trace.t_first() << ", "
       << trace.t_last() << "]";
    throw ConfigError(os.str());
  }
  auto it = std::upper_bound(trace.times.begin(), trace.times.end(), t);
  std::size_t i = it == trace.times.begin() ? 0 : (it - trace.times.begin()) - 1;
  if (i + 1 >= trace.times.size()) i = trace.times.size() - 2;
  const double dt = trace.times[i + 1] - trace.times[i];
  const double w = (t - trace.times[i]) / dt;
  const double slope = (trace.speeds[i + 1] - trace.speeds[i]) / dt;
  return {trace.speeds[i] + (trace.speeds[i + 1] - trace.speeds[i]) * w, slope};
}

ProfileSample sample(const Profile& profile, double t) {
  if (std::holds_alternative<ProfileSpec>(profile))
    return sample_profile(std::get<ProfileSpec>(profile), t);
  return sample_trace(std::get<SpeedTrace>(profile), t);
}

double duration(const Profile& profile) {
  if (std::holds_alternative<ProfileSpec>(profile))
    return profile_duration(std::get<ProfileSpec>(profile));
  return std::get<SpeedTrace>(profile).t_last();
}

}  // namespace cacc
