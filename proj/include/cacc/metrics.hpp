#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cacc/convoy.hpp"
#include "cacc/types.hpp"

namespace cacc {

/// Raw driveability measures of one acceleration channel.
struct RawScores {
  std::optional<double> response_time;  // s, first crossing of 0.5 m/s^2
  std::optional<double> bump;           // m/s^3, mean slope of the initial rise
  bool bump_step_like = false;          // rise crossed both thresholds in one sample
  double kick = 0.0;                    // m/s^2, drop after the acceleration peak
  double stumble = 0.0;                 // m/s^2, drop during the rise phase
  int stumble_sign_changes = 0;         // diagnostics
  double peak_jerk = 0.0;               // m/s^3
  double vdv = 0.0;                     // m/s^1.75, band-limited vibration dose
};

/// Linear raw -> [0, 10] maps, 10 at best_raw and 0 at worst_raw, clamped.
struct NormalizationTable {
  struct Bound {
    double best;
    double worst;
  };
  Bound response_time{0.5, 5.0};
  Bound bump{3.0, 0.0};
  Bound kick{0.0, 2.0};
  Bound stumble{0.0, 2.0};
  Bound peak_jerk{0.0, 2.0};
  Bound vdv{0.0, 5.0};

  void validate() const;
};

/// Metric axis order used everywhere scores are laid out as six values.
inline constexpr std::array<const char*, 6> kMetricNames = {
    "response_time", "bump", "kick", "stumble", "peak_jerk", "vdv"};

struct DriveabilityScores {
  RawScores raw;
  std::array<double, 6> normalized{};  // kMetricNames order
};

/// First time the acceleration reaches 0.5 m/s^2, linearly interpolated
/// between samples; empty when the threshold is never met.
std::optional<double> response_time(std::span<const double> a, double dt);

/// Mean slope of the initial rise, from the first sample above the 0.05
/// noise floor to the sample reaching 0.5 m/s^2. When both thresholds fall in
/// one sample the one-step slope from the noise floor is returned and
/// *step_like is set. Empty when the response never reaches 0.5.
std::optional<double> bump(std::span<const double> a, double dt, bool* step_like = nullptr);

/// Largest drop below the global acceleration maximum over the remainder of
/// the series (a_max minus the minimum after it). Zero for signals that never
/// fall below their peak.
double kick(std::span<const double> a);

/// Largest peak-to-valley drop before the global acceleration maximum,
/// limited to the first demand_window seconds. Counts zero crossings of a in
/// that window into *sign_changes when given.
double stumble(std::span<const double> a, double dt, double demand_window,
               int* sign_changes = nullptr);

/// Max |da/dt| by central difference (one-sided at the ends).
double peak_jerk(std::span<const double> a, double dt);

/// Zero-phase 1-32 Hz band-pass: 2nd-order Butterworth high- and low-pass
/// biquads in cascade (4th order total), run forward and backward over an
/// odd-reflection padded copy of the signal.
std::vector<double> bandpass_1_32(std::span<const double> a, double dt);

/// Fourth root of the trapezoidal integral of a^4 — no filtering (test hook).
double vdv_raw(std::span<const double> a, double dt);

/// Vibration dose value of the 1-32 Hz band-passed signal. Requires
/// dt <= 1/64 s and at least one second of data.
double vdv(std::span<const double> a, double dt);

RawScores compute_raw_scores(std::span<const double> a, double dt, double demand_window);

DriveabilityScores normalize(const RawScores& raw, const NormalizationTable& table);

/// All six measures for every vehicle's acceleration channel.
std::vector<DriveabilityScores> spider_table(const ConvoyTrace& trace,
                                             const NormalizationTable& table);

/// Metric table as CSV (one row per vehicle, raw + normalized columns).
void write_metrics_csv(const std::vector<DriveabilityScores>& scores, std::ostream& out);

/// Metric table as a JSON document keyed by vehicle index.
std::string metrics_json(const std::vector<DriveabilityScores>& scores);

}  // namespace cacc
