#pragma once

#include "cacc/types.hpp"

namespace cacc {

/// PD gains of the spacing controller.
struct ControllerGains {
  double kp = 4.0;  // 1/s^2, position error to commanded acceleration
  double kd = 2.0;  // 1/s, error rate to commanded acceleration
};

namespace gains {
inline constexpr ControllerGains kOriginal{4.0, 2.0};
inline constexpr ControllerGains kRedesigned{0.1609, 0.6575};
}  // namespace gains

/// Constant-plus-headway spacing policy:
/// desired gap = standstill_distance + headway * own velocity.
struct SpacingPolicy {
  double standstill_distance = 20.0;  // m (vehicle length + standstill gap)
  double headway = 0.6;               // s

  void validate() const {
    if (!(headway > 0.0)) throw ConfigError("headway must be > 0");
    if (!(standstill_distance > 0.0)) throw ConfigError("standstill_distance must be > 0");
  }
};

/// Per-vehicle controller memory: previous spacing error for the backward
/// difference, and the state of the feedforward filter 1/(headway*s + 1).
struct ControllerState {
  double prev_error = 0.0;  // m
  double ff_state = 0.0;    // m/s^2
};

struct ControlStep {
  double command = 0.0;  // m/s^2
  ControllerState state;
};

/// Spacing error e = (pred - own) - (standstill + headway*v_own).
/// Positive when the gap is larger than desired.
double spacing_error(double pred_position, double own_position, double own_velocity,
                     const SpacingPolicy& policy);

/// One step of the PD law: kp*e + kd*(e - e_prev)/dt, backward difference.
ControlStep pd_control(const ControllerState& state, double error, double dt,
                       const ControllerGains& gains);

/// One exactly-discretized step of the feedforward filter 1/(headway*s + 1)
/// driven by the predecessor's acceleration (held over the step).
ControlStep feedforward(const ControllerState& state, double pred_accel, double dt,
                        const SpacingPolicy& policy);

struct FollowerInputs {
  double pred_position = 0.0;  // m
  double pred_accel = 0.0;     // m/s^2, broadcast by the predecessor
  double own_position = 0.0;   // m
  double own_velocity = 0.0;   // m/s
};

/// Full follower law: PD on the spacing error plus filtered predecessor
/// acceleration feedforward.
ControlStep follower_command(const ControllerState& state, const FollowerInputs& in,
                             const SpacingPolicy& policy, const ControllerGains& gains,
                             double dt);

/// Velocity-tracking law for a lead vehicle that follows a speed profile
/// directly: desired acceleration feedforward plus proportional velocity
/// correction.
double lead_command(double v_desired, double a_desired, double own_velocity, double kv);

}  // namespace cacc
