#include "cacc/convoy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace cacc {

void Scenario::validate() const {
  if (n_vehicles < 1) throw ConfigError("n_vehicles must be >= 1");
  params.validate();
  policy().validate();
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
  delay_steps(params.delay_phi, dt);  // enforces dt > 0 and integral delay
  if (lead_mode == LeadMode::velocity_tracking && !(kv_lead > 0.0))
    throw ConfigError("kv_lead must be > 0");
  if (accel_clamp && !(accel_clamp->first < accel_clamp->second))
    throw ConfigError("accel_clamp must satisfy min < max");
  if (std::holds_alternative<SpeedTrace>(profile)) {
    const auto& tr = std::get<SpeedTrace>(profile);
    tr.validate();
    if (t_end > tr.t_last() + 1e-9)
      throw ConfigError("t_end exceeds the speed trace range");
  } else {
    std::get<ProfileSpec>(profile).validate();
  }
}

std::vector<double> initial_positions(const Scenario& scenario) {
  scenario.validate();
  std::vector<double> xs(scenario.n_vehicles);
  const double spacing = scenario.params.standstill_distance();
  for (int i = 0; i < scenario.n_vehicles; ++i) xs[i] = -i * spacing;
  return xs;
}

std::vector<double> jerk_series(const std::vector<double>& accel, double dt) {
  const std::size_t n = accel.size();
  std::vector<double> j(n, 0.0);
  if (n < 2) return j;
  for (std::size_t k = 1; k + 1 < n; ++k) j[k] = (accel[k + 1] - accel[k - 1]) / (2.0 * dt);
  j[0] = (accel[1] - accel[0]) / dt;
  j[n - 1] = (accel[n - 1] - accel[n - 2]) / dt;
  return j;
}

ConvoyTrace simulate(const Scenario& scenario) {
  scenario.validate();
  const int n = scenario.n_vehicles;
  const double dt = scenario.dt;
  const std::size_t steps = static_cast<std::size_t>(std::floor(scenario.t_end / dt));
  const SpacingPolicy policy = scenario.policy();

  std::vector<PlantState> plants;
  plants.reserve(n);
  const std::vector<double> x0 = initial_positions(scenario);
  const ProfileSample s0 = sample(scenario.profile, 0.0);
  for (int i = 0; i < n; ++i)
    plants.push_back(init_plant(scenario.params, x0[i], 0.0, dt));
  (void)s0;  // vehicles start at rest; profiles start from a stop

  std::vector<ControllerState> ctrl(n);
  // virtual predecessor: executes the profile exactly, one standstill
  // distance ahead of vehicle 0
  double virtual_pos = policy.standstill_distance;

  ConvoyTrace trace;
  trace.dt = dt;
  trace.times.resize(steps + 1);
  trace.vehicles.resize(n);
  for (auto& ch : trace.vehicles) {
    ch.position.resize(steps + 1);
    ch.velocity.resize(steps + 1);
    ch.acceleration.resize(steps + 1);
  }
  auto record = [&](std::size_t k) {
    trace.times[k] = k * dt;
    for (int i = 0; i < n; ++i) {
      trace.vehicles[i].position[k] = plants[i].position;
      trace.vehicles[i].velocity[k] = plants[i].velocity;
      trace.vehicles[i].acceleration[k] = plants[i].acceleration;
    }
  };
  record(0);

  std::vector<double> u(n, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = k * dt;
    const ProfileSample ref = sample(scenario.profile, t);

    // commands from the step-k snapshot
    for (int i = 0; i < n; ++i) {
      if (i == 0) {
        if (scenario.lead_mode == LeadMode::velocity_tracking) {
          u[0] = lead_command(ref.v, ref.a, plants[0].velocity, scenario.kv_lead);
          continue;
        }
        FollowerInputs in;
        in.pred_position = virtual_pos;
        in.pred_accel = ref.a;
        in.own_position = plants[0].position;
        in.own_velocity = plants[0].velocity;
        ControlStep cs = follower_command(ctrl[0], in, policy, scenario.gains, dt);
        ctrl[0] = cs.state;
        u[0] = cs.command;
      } else {
        FollowerInputs in;
        in.pred_position = trace.vehicles[i - 1].position[k];
        in.pred_accel = trace.vehicles[i - 1].acceleration[k];
        in.own_position = plants[i].position;
        in.own_velocity = plants[i].velocity;
        ControlStep cs = follower_command(ctrl[i], in, policy, scenario.gains, dt);
        ctrl[i] = cs.state;
        u[i] = cs.command;
      }
      if (scenario.accel_clamp)
        u[i] = std::clamp(u[i], scenario.accel_clamp->first, scenario.accel_clamp->second);
    }

    for (int i = 0; i < n; ++i) {
      try {
        plants[i] = step_plant(plants[i], scenario.params, u[i], dt);
      } catch (const DivergenceError&) {
        std::ostringstream os;
        os << "divergence: non-finite command for vehicle " << i << " at t=" << t << " s";
        throw DivergenceError(i, t, os.str());
      }
      const bool finite = std::isfinite(plants[i].position) &&
                          std::isfinite(plants[i].velocity) &&
                          std::isfinite(plants[i].acceleration);
      if (!finite) {
        std::ostringstream os;
        os << "divergence: vehicle " << i << " state non-finite at t=" << (t + dt) << " s";
        throw DivergenceError(i, t + dt, os.str());
      }
    }
    const ProfileSample ref_next = sample(scenario.profile, (k + 1) * dt);
    virtual_pos += 0.5 * dt * (ref.v + ref_next.v);
    record(k + 1);
  }

  for (auto& ch : trace.vehicles) ch.jerk = jerk_series(ch.acceleration, dt);
  return trace;
}

void write_trace_csv(const ConvoyTrace& trace, std::ostream& out) {
  out << "time_s";
  for (int i = 0; i < trace.n_vehicles(); ++i)
    out << ",x" << i << "_m,v" << i << "_mps,a" << i << "_mps2,j" << i << "_mps3";
  out << "\n";
  char buf[32];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t k = 0; k < trace.n_samples(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.times[k]);
    out << buf;
    for (const auto& ch : trace.vehicles) {
      emit(ch.position[k]);
      emit(ch.velocity[k]);
      emit(ch.acceleration[k]);
      emit(ch.jerk[k]);
    }
    out << "\n";
  }
}

ConvoyTrace read_trace_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(name + ": empty trace file");
  // count vehicles from the header
  int columns = 1;
  for (char c : line) columns += c == ',';
  if (columns < 5 || (columns - 1) % 4 != 0)
    throw ParseError(name + ":1: expected header time_s plus x/v/a/j blocks");
  const int n = (columns - 1) / 4;

  ConvoyTrace trace;
  trace.vehicles.resize(n);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(name + ":" + std::to_string(lineno) + ": malformed number '" +
                         cell + "'");
      }
    }
    if (static_cast<int>(vals.size()) != columns)
      throw ParseError(name + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(columns) + " columns, got " +
                       std::to_string(vals.size()));
    trace.times.push_back(vals[0]);
    for (int i = 0; i < n; ++i) {
      trace.vehicles[i].position.push_back(vals[1 + 4 * i]);
      trace.vehicles[i].velocity.push_back(vals[2 + 4 * i]);
      trace.vehicles[i].acceleration.push_back(vals[3 + 4 * i]);
      trace.vehicles[i].jerk.push_back(vals[4 + 4 * i]);
    }
  }
  if (trace.times.size() < 2) throw ParseError(name + ": needs at least 2 rows");
  trace.dt = trace.times[1] - trace.times[0];
  return trace;
}

}  // namespace cacc
