#include "cacc/plant.hpp"

#include <cmath>
#include <sstream>

namespace cacc {

std::size_t delay_steps(double delay_phi, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("dt must be > 0, got " + std::to_string(dt));
  const double ratio = delay_phi / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9) {
    std::ostringstream os;
    os << "delay_phi/dt must be integral: delay_phi=" << delay_phi << " dt=" << dt
       << " gives " << ratio << " steps";
    throw ConfigError(os.str());
  }
  return static_cast<std::size_t>(rounded);
}

PlantState init_plant(const VehicleParams& params, double x0, double v0, double dt) {
  params.validate();
  PlantState s;
  s.position = x0;
  s.velocity = v0;
  s.acceleration = 0.0;
  s.delay_line.assign(delay_steps(params.delay_phi, dt), 0.0);
  s.head = 0;
  return s;
}

PlantState step_plant(const PlantState& state, const VehicleParams& params, double u, double dt) {
  if (!std::isfinite(u))
    throw DivergenceError(-1, 0.0, "non-finite commanded acceleration");
  PlantState s = state;
  double u_delayed = u;
  if (!s.delay_line.empty()) {
    u_delayed = s.delay_line[s.head];
    s.delay_line[s.head] = u;
    s.head = (s.head + 1) % s.delay_line.size();
  }
  const double decay = std::exp(-dt / params.lag_tau);
  const double a_next = s.acceleration * decay + u_delayed * (1.0 - decay);
  const double v_next = s.velocity + 0.5 * dt * (s.acceleration + a_next);
  s.position += 0.5 * dt * (s.velocity + v_next);
  s.velocity = v_next;
  s.acceleration = a_next;
  return s;
}

}  // namespace cacc
