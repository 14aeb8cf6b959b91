#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "cacc/control.hpp"
#include "cacc/types.hpp"

namespace cacc::design {

/// Pole-confinement region in the left half plane: minimum decay rate sigma,
/// minimum damping cos(theta) (theta measured from the negative real axis),
/// and maximum natural frequency omega_b (modulus circle).
struct DRegionSpec {
  double sigma = 0.5;      // 1/s
  double theta_deg = 30.0; // deg, damping ratio = cos(theta)
  double omega_b = 20.0;   // rad/s

  void validate() const {
    if (!(sigma > 0.0)) throw ConfigError("dregion: sigma must be > 0");
    if (!(theta_deg > 0.0 && theta_deg < 90.0))
      throw ConfigError("dregion: theta must be in (0, 90) degrees");
    if (!(omega_b > sigma)) throw ConfigError("dregion: omega_b must exceed sigma");
  }
  double zeta() const { return std::cos(theta_deg * M_PI / 180.0); }
};

enum class DelayMode { exact, pade1, none };

std::string to_string(DelayMode mode);
DelayMode delay_mode_from_string(const std::string& s);

/// Plant and policy context for the gain design. The headway term shapes the
/// spacing reference, not the loop gain, so the characteristic function below
/// does not depend on it.
struct LoopModel {
  VehicleParams params;
  double headway = 0.6;
  DelayMode delay_mode = DelayMode::exact;
};

/// Dead-time factor D(s) under the model's delay mode: exact exponential,
/// first-order Pade rational, or 1.
std::complex<double> delay_factor(std::complex<double> s, const LoopModel& model);

/// Closed-loop characteristic function of the gap regulation loop:
///   Delta(s) = s^2 (tau s + 1) + (kp + kd s) D(s)
std::complex<double> char_eval(std::complex<double> s, const ControllerGains& gains,
                               const LoopModel& model);

enum class Boundary { sigma, damping, bandwidth };

/// One mapped boundary in the (kp, kd) plane. `parameter` is the strictly
/// increasing boundary coordinate (frequency along the sigma line, radius
/// along the damping ray, angle along the bandwidth arc, kd along real-root
/// lines). +1/-1 in `feasible_side` records which side of the curve the
/// pole-feasible set lies on (0 when undetermined).
struct BoundaryCurve {
  std::string label;
  std::vector<double> parameter;
  std::vector<ControllerGains> points;
  int feasible_side = 0;
  int skipped_singular = 0;
};

/// Maps a complex-root boundary: at each boundary point s*, the two real
/// equations Re/Im Delta(s*; kp, kd) = 0 are linear in the gains and solved
/// directly. Grid points with a near-singular system (|det| < 1e-12) are
/// skipped and counted. Throws when every point is singular.
BoundaryCurve map_crb(Boundary boundary, const DRegionSpec& spec, const LoopModel& model,
                      std::span<const double> grid);

/// Real-root boundary through a fixed real frequency: Delta(s_real) = 0 is a
/// single linear equation, a line kp = s_real-slope * kd + intercept, sampled
/// over the kd grid.
BoundaryCurve rrb_line(double s_real, const LoopModel& model, std::span<const double> kd_grid);

/// Real-root boundaries anchored at the region's real-axis crossings
/// (s = -sigma and s = -omega_b).
BoundaryCurve map_rrb(Boundary boundary, const DRegionSpec& spec, const LoopModel& model);

/// Default log-spaced grid for a boundary, n samples.
std::vector<double> default_grid(Boundary boundary, const DRegionSpec& spec, int n);

/// Closed-loop poles of the rational model: companion-matrix eigenvalues of
/// the characteristic polynomial (degree 3 without delay, 3 + order with the
/// Pade-approximated delay). `exact` mode is rationalized at the same order.
std::vector<std::complex<double>> poles(const ControllerGains& gains, const LoopModel& model,
                                        int pade_order = 1);

/// Poles of the Pade approximant itself (empty without delay). Perturbed
/// copies of these show up among the closed-loop roots as approximation
/// artifacts and are exempt from the modulus constraint.
std::vector<std::complex<double>> pade_artifact_anchors(const LoopModel& model, int pade_order);

struct PoleCheck {
  std::vector<std::complex<double>> all_poles;
  bool pass = false;
  double sigma_margin = 0.0;  // min over poles of (-sigma - Re)/sigma
  double zeta_margin = 0.0;   // min over complex poles of (zeta - cos(theta))/cos(theta)
  double radius_margin = 0.0; // min over poles of (omega_b - |s|)/omega_b
  int artifacts_excluded = 0;
};

/// Tests the rational-model poles against the region. `zeta_tol` (and
/// `sigma_tol`, both absolute) loosen the respective bounds; artifact roots
/// near the Pade approximant poles are excluded from the modulus constraint.
PoleCheck certify(const ControllerGains& gains, const DRegionSpec& spec,
                  const LoopModel& model, double zeta_tol = 0.0, double sigma_tol = 0.0);

inline bool d_stable(const ControllerGains& gains, const DRegionSpec& spec,
                     const LoopModel& model) {
  return certify(gains, spec, model).pass;
}

/// Assembled feasible set in the gain plane: boundary curves, a raster mask
/// from the pole test, and a certified interior probe (the feasible grid
/// point with the largest constraint margin).
struct GainRegion {
  DRegionSpec spec;
  LoopModel model;
  std::vector<BoundaryCurve> curves;
  double kp_min = 0, kp_max = 0, kd_min = 0, kd_max = 0;
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> mask;  // ny rows of nx cells, 1 = pole-feasible
  bool empty = true;
  ControllerGains probe{};
  PoleCheck probe_cert;

  bool mask_at(double kp, double kd) const;
  double cell_diag() const;
  double diameter() const;  // diagonal of the feasible bounding box
};

/// Builds the region: maps all five boundary curves, rasterizes the pole
/// test over a box bracketing the feasible set, classifies each curve's
/// feasible side, and picks the max-margin probe. `resolution` is the number
/// of samples per boundary curve; the mask resolution is derived from it.
GainRegion assemble_region(const DRegionSpec& spec, const LoopModel& model,
                           int resolution = 2000);

struct Membership {
  bool pole_test = false;   // authoritative
  bool geometric = false;   // raster-mask lookup
  bool agree = true;        // diagnostic: the two views coincide
};

Membership region_membership(const ControllerGains& gains, const GainRegion& region);

/// Authoritative membership (pole test).
bool in_region(const ControllerGains& gains, const GainRegion& region);

/// Membership up to a gain-space boundary tolerance: true when some point
/// within `tol` of the gains passes the strict pole test. Boundary-chosen
/// gain pairs published at limited precision need this slack.
bool in_region_tol(const ControllerGains& gains, const GainRegion& region, double tol);

/// Region summary (probe, certificate, curve inventory) as JSON.
std::string region_json(const GainRegion& region);

/// Boundary curves as CSV: label, parameter, kp, kd.
void write_region_csv(const GainRegion& region, std::ostream& out);

}  // namespace cacc::design
