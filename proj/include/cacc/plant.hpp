#pragma once

#include <vector>

#include "cacc/types.hpp"

namespace cacc {

/// State of one longitudinal plant: double integrator behind a first-order
/// lag and a dead time. The dead time is realized as a ring buffer of past
/// commands, so delay_phi must be an integer number of steps.
struct PlantState {
  double position = 0.0;      // m
  double velocity = 0.0;      // m/s
  double acceleration = 0.0;  // m/s^2
  std::vector<double> delay_line;  // pending commands, oldest at `head`
  std::size_t head = 0;
};

/// Builds a plant state at rest in acceleration, with the delay line zeroed.
/// Requires dt > 0 and delay_phi/dt integral to within 1e-9 so the dead time
/// is an exact sample count.
PlantState init_plant(const VehicleParams& params, double x0, double v0, double dt);

/// Advances the plant one step under commanded acceleration u (held constant
/// over the step). The lag is discretized exactly for a held input:
///   a' = a*exp(-dt/tau) + u_delayed*(1 - exp(-dt/tau))
/// velocity and position integrate trapezoidally. Throws DivergenceError on
/// non-finite input.
PlantState step_plant(const PlantState& state, const VehicleParams& params, double u, double dt);

/// Number of delay-line slots for a given delay/step combination; throws
/// ConfigError when the ratio is not integral.
std::size_t delay_steps(double delay_phi, double dt);

}  // namespace cacc
