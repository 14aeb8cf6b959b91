#include "cacc/control.hpp"

#include <cmath>

namespace cacc {

double spacing_error(double pred_position, double own_position, double own_velocity,
                     const SpacingPolicy& policy) {
  return (pred_position - own_position) -
         (policy.standstill_distance + policy.headway * own_velocity);
}

ControlStep pd_control(const ControllerState& state, double error, double dt,
                       const ControllerGains& gains) {
  if (!(dt > 0.0)) throw ConfigError("pd_control: dt must be > 0");
  ControlStep out;
  out.command = gains.kp * error + gains.kd * (error - state.prev_error) / dt;
  out.state = state;
  out.state.prev_error = error;
  return out;
}

ControlStep feedforward(const ControllerState& state, double pred_accel, double dt,
                        const SpacingPolicy& policy) {
  if (!(dt > 0.0)) throw ConfigError("feedforward: dt must be > 0");
  const double decay = std::exp(-dt / policy.headway);
  ControlStep out;
  out.state = state;
  out.state.ff_state = state.ff_state * decay + pred_accel * (1.0 - decay);
  out.command = out.state.ff_state;
  return out;
}

ControlStep follower_command(const ControllerState& state, const FollowerInputs& in,
                             const SpacingPolicy& policy, const ControllerGains& gains,
                             double dt) {
  const double e = spacing_error(in.pred_position, in.own_position, in.own_velocity, policy);
  ControlStep pd = pd_control(state, e, dt, gains);
  ControlStep ff = feedforward(pd.state, in.pred_accel, dt, policy);
  ff.command += pd.command;
  return ff;
}

double lead_command(double v_desired, double a_desired, double own_velocity, double kv) {
  if (!(kv > 0.0)) throw ConfigError("lead_command: kv must be > 0");
  return a_desired + kv * (v_desired - own_velocity);
}

}  // namespace cacc
