#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "cacc/control.hpp"
#include "cacc/plant.hpp"
#include "cacc/profiles.hpp"
#include "cacc/types.hpp"

namespace cacc {

/// How vehicle 0 is driven.
///  - virtual_follower: vehicle 0 runs the same spacing controller against a
///    virtual predecessor that executes the desired profile exactly. Every
///    vehicle in the string is then shaped by the gains under study.
///  - velocity_tracking: vehicle 0 tracks the profile speed directly with
///    lead_command (gain-independent).
enum class LeadMode { virtual_follower, velocity_tracking };

struct Scenario {
  int n_vehicles = 5;
  VehicleParams params;
  ControllerGains gains = gains::kOriginal;
  double headway = 0.6;  // s
  double kv_lead = 2.0;  // 1/s, velocity_tracking mode only
  LeadMode lead_mode = LeadMode::virtual_follower;
  Profile profile = ProfileSpec{};
  double dt = 0.01;    // s
  double t_end = 80.0; // s
  std::optional<std::pair<double, double>> accel_clamp;  // {min,max} on commands

  void validate() const;
  SpacingPolicy policy() const { return {params.standstill_distance(), headway}; }
};

/// Time series for the whole string. Vehicle 0 is the front of the convoy.
/// Jerk is the central difference of acceleration (one-sided at the ends).
struct ConvoyTrace {
  std::vector<double> times;
  struct Channels {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> acceleration;
    std::vector<double> jerk;
  };
  std::vector<Channels> vehicles;
  double dt = 0.0;

  int n_vehicles() const { return static_cast<int>(vehicles.size()); }
  std::size_t n_samples() const { return times.size(); }
};

/// Exact standstill equilibrium placement: vehicle 0 at the origin, vehicle i
/// at -i * standstill_distance.
std::vector<double> initial_positions(const Scenario& scenario);

/// Runs the convoy. Per step: every command is computed from the previous
/// step's state snapshot (followers read predecessor position and broadcast
/// acceleration from that snapshot), then all plants advance together.
/// Deterministic: identical scenarios produce identical traces.
/// Throws DivergenceError with vehicle index and time on non-finite state.
ConvoyTrace simulate(const Scenario& scenario);

/// Central-difference jerk of one acceleration channel.
std::vector<double> jerk_series(const std::vector<double>& accel, double dt);

/// Trace CSV: header `time_s,x0_m,v0_mps,a0_mps2,j0_mps3,x1_m,...`, one row
/// per step, full double precision.
void write_trace_csv(const ConvoyTrace& trace, std::ostream& out);
ConvoyTrace read_trace_csv(std::istream& in, const std::string& name = "trace");

}  // namespace cacc
