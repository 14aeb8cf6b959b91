#include "cacc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace cacc {

namespace {
constexpr double kResponseLevel = 0.5;  // m/s^2
constexpr double kNoiseFloor = 0.05;    // m/s^2
}  // namespace

void NormalizationTable::validate() const {
  for (const Bound& b : {response_time, bump, kick, stumble, peak_jerk, vdv})
    if (b.best == b.worst) throw ConfigError("normalization bounds must differ");
}

std::optional<double> response_time(std::span<const double> a, double dt) {
  if (a.empty()) throw ConfigError("response_time: empty series");
  if (a[0] >= kResponseLevel) return 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    if (a[k] >= kResponseLevel) {
      const double w = (kResponseLevel - a[k - 1]) / (a[k] - a[k - 1]);
      return (static_cast<double>(k - 1) + w) * dt;
    }
  }
  return std::nullopt;
}

std::optional<double> bump(std::span<const double> a, double dt, bool* step_like) {
  if (step_like) *step_like = false;
  if (a.empty()) throw ConfigError("bump: empty series");
  std::size_t k0 = a.size(), k1 = a.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k0 == a.size() && a[k] > kNoiseFloor) k0 = k;
    if (a[k] >= kResponseLevel) {
      k1 = k;
      break;
    }
  }
  if (k1 == a.size()) return std::nullopt;  // response never happened
  if (k1 == k0) {
    // the rise crossed both thresholds within one sample
    if (step_like) *step_like = true;
    return (a[k1] - kNoiseFloor) / dt;
  }
  return (a[k1] - a[k0]) / ((k1 - k0) * dt);
}

double kick(std::span<const double> a) {
  if (a.empty()) throw ConfigError("kick: empty series");
  const std::size_t m = std::max_element(a.begin(), a.end()) - a.begin();
  double lowest = a[m];
  for (std::size_t k = m; k < a.size(); ++k) lowest = std::min(lowest, a[k]);
  return a[m] - lowest;
}

double stumble(std::span<const double> a, double dt, double demand_window,
               int* sign_changes) {
  if (a.empty()) throw ConfigError("stumble: empty series");
  if (!(demand_window > 0.0)) throw ConfigError("stumble: demand_window must be > 0");
  const double span_s = (a.size() - 1) * dt;
  if (demand_window > span_s + 1e-9)
    throw ConfigError("stumble: demand_window exceeds the series span");
  std::size_t last = std::min<std::size_t>(
      a.size() - 1, static_cast<std::size_t>(std::floor(demand_window / dt + 1e-9)));
  const std::size_t m = std::max_element(a.begin(), a.end()) - a.begin();
  last = std::min(last, m);  // only the rise phase, before the peak

  double peak = a[0], worst = 0.0;
  int flips = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    peak = std::max(peak, a[k]);
    worst = std::max(worst, peak - a[k]);
    if (k > 0 && a[k] != 0.0 && a[k - 1] != 0.0 &&
        std::signbit(a[k]) != std::signbit(a[k - 1]))
      ++flips;
  }
  if (sign_changes) *sign_changes = flips;
  return worst;
}

double peak_jerk(std::span<const double> a, double dt) {
  if (a.size() < 3) throw ConfigError("peak_jerk: series must have >= 3 samples");
  double peak = 0.0;
  for (std::size_t k = 1; k + 1 < a.size(); ++k)
    peak = std::max(peak, std::abs(a[k + 1] - a[k - 1]) / (2.0 * dt));
  peak = std::max(peak, std::abs(a[1] - a[0]) / dt);
  peak = std::max(peak, std::abs(a[a.size() - 1] - a[a.size() - 2]) / dt);
  return peak;
}

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;

  void apply(std::vector<double>& x) const {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    for (double& v : x) {
      const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
};

// Bilinear-transform Butterworth sections (Q = 1/sqrt(2)), prewarped.
Biquad butter_lp(double fc, double dt) {
  const double K = std::tan(M_PI * fc * dt);
  const double norm = 1.0 / (1.0 + std::sqrt(2.0) * K + K * K);
  return {K * K * norm, 2.0 * K * K * norm, K * K * norm,
          2.0 * (K * K - 1.0) * norm, (1.0 - std::sqrt(2.0) * K + K * K) * norm};
}

Biquad butter_hp(double fc, double dt) {
  const double K = std::tan(M_PI * fc * dt);
  const double norm = 1.0 / (1.0 + std::sqrt(2.0) * K + K * K);
  return {norm, -2.0 * norm, norm, 2.0 * (K * K - 1.0) * norm,
          (1.0 - std::sqrt(2.0) * K + K * K) * norm};
}

}  // namespace

std::vector<double> bandpass_1_32(std::span<const double> a, double dt) {
  if (!(dt > 0.0)) throw ConfigError("bandpass: dt must be > 0");
  if (dt > 1.0 / 64.0)
    throw ConfigError("bandpass: dt must be <= 1/64 s for the 32 Hz band edge, got " +
                      std::to_string(dt));
  const std::size_t n = a.size();
  if (n < 2) throw ConfigError("bandpass: series too short");

  // odd-reflection padding, up to three seconds per side
  const std::size_t pad = std::min<std::size_t>(n - 1, static_cast<std::size_t>(3.0 / dt));
  std::vector<double> x;
  x.reserve(n + 2 * pad);
  for (std::size_t k = 0; k < pad; ++k) x.push_back(2.0 * a[0] - a[pad - k]);
  x.insert(x.end(), a.begin(), a.end());
  for (std::size_t k = 0; k < pad; ++k) x.push_back(2.0 * a[n - 1] - a[n - 2 - k]);

  const Biquad hp = butter_hp(1.0, dt);
  const Biquad lp = butter_lp(32.0, dt);
  hp.apply(x);
  lp.apply(x);
  std::reverse(x.begin(), x.end());
  hp.apply(x);
  lp.apply(x);
  std::reverse(x.begin(), x.end());
  return {x.begin() + pad, x.begin() + pad + n};
}

double vdv_raw(std::span<const double> a, double dt) {
  if (a.size() < 2) throw ConfigError("vdv: series too short");
  double acc = 0.0;
  double prev = std::pow(a[0], 4);
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double cur = std::pow(a[k], 4);
    acc += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return std::pow(acc, 0.25);
}

double vdv(std::span<const double> a, double dt) {
  if ((a.size() - 1) * dt < 1.0 - 1e-9)
    throw ConfigError("vdv: series must cover at least 1 s");
  const std::vector<double> filtered = bandpass_1_32(a, dt);
  return vdv_raw(filtered, dt);
}

RawScores compute_raw_scores(std::span<const double> a, double dt, double demand_window) {
  RawScores r;
  r.response_time = response_time(a, dt);
  r.bump = bump(a, dt, &r.bump_step_like);
  r.kick = kick(a);
  r.stumble = stumble(a, dt, demand_window, &r.stumble_sign_changes);
  r.peak_jerk = peak_jerk(a, dt);
  r.vdv = vdv(a, dt);
  return r;
}

namespace {
double linmap(double raw, const NormalizationTable::Bound& b) {
  const double score = 10.0 * (raw - b.worst) / (b.best - b.worst);
  return std::clamp(score, 0.0, 10.0);
}
}  // namespace

DriveabilityScores normalize(const RawScores& raw, const NormalizationTable& table) {
  table.validate();
  DriveabilityScores out;
  out.raw = raw;
  out.normalized[0] =
      raw.response_time ? linmap(*raw.response_time, table.response_time) : 0.0;
  out.normalized[1] = raw.bump ? linmap(*raw.bump, table.bump) : 0.0;
  out.normalized[2] = linmap(raw.kick, table.kick);
  out.normalized[3] = linmap(raw.stumble, table.stumble);
  out.normalized[4] = linmap(raw.peak_jerk, table.peak_jerk);
  out.normalized[5] = linmap(raw.vdv, table.vdv);
  return out;
}

std::vector<DriveabilityScores> spider_table(const ConvoyTrace& trace,
                                             const NormalizationTable& table) {
  std::vector<DriveabilityScores> out;
  out.reserve(trace.vehicles.size());
  const double window = (trace.n_samples() - 1) * trace.dt;
  for (const auto& ch : trace.vehicles)
    out.push_back(normalize(compute_raw_scores(ch.acceleration, trace.dt, window), table));
  return out;
}

void write_metrics_csv(const std::vector<DriveabilityScores>& scores, std::ostream& out) {
  out << "vehicle";
  for (const char* m : kMetricNames) out << ',' << m << "_raw";
  for (const char* m : kMetricNames) out << ',' << m << "_score";
  out << ",bump_step_like,stumble_sign_changes\n";
  char buf[32];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const RawScores& r = scores[i].raw;
    out << i;
    if (r.response_time) emit(*r.response_time); else out << ',';
    if (r.bump) emit(*r.bump); else out << ',';
    emit(r.kick);
    emit(r.stumble);
    emit(r.peak_jerk);
    emit(r.vdv);
    for (double s : scores[i].normalized) emit(s);
    out << ',' << (r.bump_step_like ? 1 : 0) << ',' << r.stumble_sign_changes << "\n";
  }
}

std::string metrics_json(const std::vector<DriveabilityScores>& scores) {
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const RawScores& r = scores[i].raw;
    nlohmann::json raw;
    if (r.response_time) raw["response_time"] = *r.response_time;
    else raw["response_time"] = nullptr;
    if (r.bump) raw["bump"] = *r.bump;
    else raw["bump"] = nullptr;
    raw["kick"] = r.kick;
    raw["stumble"] = r.stumble;
    raw["peak_jerk"] = r.peak_jerk;
    raw["vdv"] = r.vdv;
    nlohmann::json norm;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m)
      norm[kMetricNames[m]] = scores[i].normalized[m];
    doc.push_back({{"vehicle", i},
                   {"raw", raw},
                   {"normalized", norm},
                   {"bump_step_like", r.bump_step_like},
                   {"stumble_sign_changes", r.stumble_sign_changes}});
  }
  return doc.dump(2);
}

}  // namespace cacc
