#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "cacc/types.hpp"

namespace cacc {

enum class ProfileKind { step, ramp, smooth, trace };

enum class SpeedUnits { mps, mph };

inline constexpr double kMphToMps = 0.44704;

/// Lead-vehicle desired velocity profile between two stops, covering a fixed
/// distance. `step` jumps to v_max instantly (theoretical reference), `ramp`
/// rises/falls at constant rates, `smooth` eases in and out with cubic
/// polynomials. `trace` defers to a tabulated drive cycle.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::ramp;
  double v_max = 15.6;       // m/s, calibrated so 720 m takes 46.15 s flat out
  double distance = 720.0;   // m
  double accel_limit = 3.0;  // m/s^2, ramp rise rate
  double decel_rate = 1.12;  // m/s^2, ramp fall rate
  double rise_time = 10.0;   // s, smooth cubic rise duration
  double fall_time = 18.2;   // s, smooth cubic fall duration
  std::string trace_path;    // trace kind only
  SpeedUnits trace_units = SpeedUnits::mph;

  void validate() const;
};

struct ProfileSample {
  double v = 0.0;  // m/s
  double a = 0.0;  // m/s^2, analytic derivative where it exists
};

/// Desired velocity and acceleration at time t (t >= 0). Past the end of the
/// profile both are zero (vehicle has stopped at the second stop sign).
ProfileSample sample_profile(const ProfileSpec& spec, double t);

/// Total time for the profile to cover its configured distance. Throws
/// ConfigError (naming the minimum feasible distance) when the rise and fall
/// phases alone overshoot the distance.
double profile_duration(const ProfileSpec& spec);

/// A tabulated speed trace: strictly increasing times, non-negative speeds.
struct SpeedTrace {
  std::vector<double> times;   // s
  std::vector<double> speeds;  // m/s

  void validate() const;
  double t_first() const { return times.front(); }
  double t_last() const { return times.back(); }
};

/// Parses a two-column delimited text file (time, speed). Comment lines
/// starting with '#' and an optional non-numeric header row are skipped.
/// Unit conversion to m/s happens at load time.
SpeedTrace load_speed_trace(const std::string& path, SpeedUnits units);
SpeedTrace parse_speed_trace(std::istream& in, SpeedUnits units, const std::string& name);

/// Linear interpolation of the trace speed; acceleration is the slope of the
/// active segment. t must lie within [t_first, t_last].
ProfileSample sample_trace(const SpeedTrace& trace, double t);

/// Scenario profile: an analytic spec or a loaded trace.
using Profile = std::variant<ProfileSpec, SpeedTrace>;

ProfileSample sample(const Profile& profile, double t);

/// Duration of the motion described by the profile (trace: last knot time).
double duration(const Profile& profile);

}  // namespace cacc
