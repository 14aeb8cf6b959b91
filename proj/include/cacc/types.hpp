#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cacc {

/// Raised for invalid configuration (bad parameter values, malformed config
/// files, infeasible specs). Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a simulation state stops being finite. Carries the vehicle
/// index and simulation time of the first offending sample. CLI exit code 3.
struct DivergenceError : std::runtime_error {
  DivergenceError(int vehicle_, double time_, const std::string& what)
      : std::runtime_error(what), vehicle(vehicle_), time(time_) {}
  int vehicle;
  double time;
};

/// Raised on malformed input files; message carries the line number.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Physical and actuation constants of one vehicle. The low-level
/// longitudinal loop from commanded to realized acceleration is a first-order
/// lag with time constant lag_tau behind a pure dead time delay_phi (actuator
/// plus communication delay lumped together).
struct VehicleParams {
  double length = 10.0;          // m
  double standstill_gap = 10.0;  // m, gap to predecessor at rest
  double lag_tau = 0.5;          // s, 1/lag_tau = low-level loop bandwidth
  double delay_phi = 0.1;        // s, lumped dead time

  void validate() const {
    if (!(lag_tau > 0.0) || !std::isfinite(lag_tau))
      throw ConfigError("lag_tau must be > 0, got " + std::to_string(lag_tau));
    if (!(delay_phi >= 0.0) || !std::isfinite(delay_phi))
      throw ConfigError("delay_phi must be >= 0, got " + std::to_string(delay_phi));
    if (!(length > 0.0))
      throw ConfigError("length must be > 0, got " + std::to_string(length));
    if (!(standstill_gap >= 0.0))
      throw ConfigError("standstill_gap must be >= 0, got " + std::to_string(standstill_gap));
  }

  /// Standstill spacing between consecutive bumpers measured front-to-front.
  double standstill_distance() const { return length + standstill_gap; }
};

}  // namespace cacc
