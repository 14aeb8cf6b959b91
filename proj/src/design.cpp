#include "cacc/design.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace cacc::design {

using complexd = std::complex<double>;

std::string to_string(DelayMode mode) {
  switch (mode) {
    case DelayMode::exact: return "exact";
    case DelayMode::pade1: return "pade1";
    case DelayMode::none: return "none";
  }
  return "?";
}

DelayMode delay_mode_from_string(const std::string& s) {
  if (s == "exact") return DelayMode::exact;
  if (s == "pade1") return DelayMode::pade1;
  if (s == "none") return DelayMode::none;
  throw ConfigError("unknown delay mode '" + s + "' (exact|pade1|none)");
}

std::complex<double> delay_factor(complexd s, const LoopModel& model) {
  const double phi = model.params.delay_phi;
  switch (model.delay_mode) {
    case DelayMode::exact: return std::exp(-phi * s);
    case DelayMode::pade1: return (1.0 - 0.5 * phi * s) / (1.0 + 0.5 * phi * s);
    case DelayMode::none: return 1.0;
  }
  return 1.0;
}

std::complex<double> char_eval(complexd s, const ControllerGains& gains,
                               const LoopModel& model) {
  const double tau = model.params.lag_tau;
  return s * s * (tau * s + 1.0) + (gains.kp + gains.kd * s) * delay_factor(s, model);
}

namespace {

// Delta(s*) = P(s*) + (kp + kd s*) Q(s*): returns P and Q.
void loop_terms(complexd s, const LoopModel& model, complexd& P, complexd& Q) {
  P = s * s * (model.params.lag_tau * s + 1.0);
  Q = delay_factor(s, model);
}

complexd boundary_point(Boundary b, const DRegionSpec& spec, double param) {
  switch (b) {
    case Boundary::sigma:
      return {-spec.sigma, param};  // param = omega > 0
    case Boundary::damping: {
      const double th = spec.theta_deg * M_PI / 180.0;
      return param * complexd{-std::cos(th), std::sin(th)};  // param = radius > 0
    }
    case Boundary::bandwidth: {
      const double psi = param * M_PI / 180.0;  // param = angle in (90, 180) deg
      return spec.omega_b * complexd{std::cos(psi), std::sin(psi)};
    }
  }
  return {};
}

const char* crb_label(Boundary b) {
  switch (b) {
    case Boundary::sigma: return "sigma_crb";
    case Boundary::damping: return "damping_crb";
    case Boundary::bandwidth: return "bandwidth_crb";
  }
  return "?";
}

}  // namespace

std::vector<double> default_grid(Boundary boundary, const DRegionSpec& spec, int n) {
  std::vector<double> grid(n);
  double lo = 1e-3, hi = 1.0;
  switch (boundary) {
    case Boundary::sigma:
      hi = std::sqrt(spec.omega_b * spec.omega_b - spec.sigma * spec.sigma);
      break;
    case Boundary::damping:
      hi = spec.omega_b;
      break;
    case Boundary::bandwidth:
      lo = 1e-2;  // degrees past 90
      hi = 90.0 * (1.0 - 1e-9);
      break;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[i] = std::exp(llo + f * (lhi - llo));
    if (boundary == Boundary::bandwidth) grid[i] += 90.0;
  }
  if (boundary == Boundary::bandwidth)
    for (double& g : grid) g = std::min(g, 180.0 * (1.0 - 1e-12));
  return grid;
}

BoundaryCurve map_crb(Boundary boundary, const DRegionSpec& spec, const LoopModel& model,
                      std::span<const double> grid) {
  spec.validate();
  model.params.validate();
  if (grid.empty()) throw ConfigError("map_crb: empty grid");
  BoundaryCurve curve;
  curve.label = crb_label(boundary);
  for (double param : grid) {
    const complexd s = boundary_point(boundary, spec, param);
    complexd P, Q;
    loop_terms(s, model, P, Q);
    const complexd sQ = s * Q;
    // [Re Q, Re sQ; Im Q, Im sQ] [kp kd]' = -[Re P; Im P]
    const double det = Q.real() * sQ.imag() - sQ.real() * Q.imag();
    if (std::abs(det) < 1e-12) {
      ++curve.skipped_singular;
      continue;
    }
    const double kp = (-P.real() * sQ.imag() + sQ.real() * P.imag()) / det;
    const double kd = (-Q.real() * P.imag() + P.real() * Q.imag()) / det;
    curve.parameter.push_back(param);
    curve.points.push_back({kp, kd});
  }
  if (curve.points.empty())
    throw ConfigError("map_crb: every grid point was singular (degenerate boundary)");
  return curve;
}

BoundaryCurve rrb_line(double s_real, const LoopModel& model,
                       std::span<const double> kd_grid) {
  model.params.validate();
  BoundaryCurve curve;
  curve.label = "rrb";
  complexd P, Q;
  loop_terms({s_real, 0.0}, model, P, Q);
  // kp + kd*s_real = -P/Q, both sides real on the real axis
  const double rhs = -P.real() / Q.real();
  for (double kd : kd_grid) {
    curve.parameter.push_back(kd);
    curve.points.push_back({rhs - kd * s_real, kd});
  }
  return curve;
}

BoundaryCurve map_rrb(Boundary boundary, const DRegionSpec& spec, const LoopModel& model) {
  spec.validate();
  double s_real = 0.0;
  std::string label;
  switch (boundary) {
    case Boundary::sigma:
      s_real = -spec.sigma;
      label = "sigma_rrb";
      break;
    case Boundary::bandwidth:
      s_real = -spec.omega_b;
      label = "bandwidth_rrb";
      break;
    case Boundary::damping:
      throw ConfigError("map_rrb: the damping cone has no real-axis anchor besides 0");
  }
  std::vector<double> kd_grid(512);
  for (std::size_t i = 0; i < kd_grid.size(); ++i)
    kd_grid[i] = 4.0 * static_cast<double>(i) / (kd_grid.size() - 1);
  BoundaryCurve c = rrb_line(s_real, model, kd_grid);
  c.label = label;
  return c;
}

std::vector<std::complex<double>> pade_artifact_anchors(const LoopModel& model,
                                                        int pade_order) {
  if (model.delay_mode == DelayMode::none || model.params.delay_phi == 0.0) return {};
  const double phi = model.params.delay_phi;
  if (pade_order == 1) return {complexd{-2.0 / phi, 0.0}};
  // roots of 1 + phi s/2 + phi^2 s^2 / 12
  const double re = -3.0 / phi, im = std::sqrt(3.0) / phi;
  return {complexd{re, im}, complexd{re, -im}};
}

std::vector<std::complex<double>> poles(const ControllerGains& gains, const LoopModel& model,
                                        int pade_order) {
  model.params.validate();
  if (pade_order != 1 && pade_order != 2)
    throw ConfigError("poles: pade_order must be 1 or 2");
  const double tau = model.params.lag_tau;
  const double phi = model.params.delay_phi;
  const bool with_delay = model.delay_mode != DelayMode::none && phi > 0.0;

  // characteristic polynomial, ascending coefficients
  std::vector<double> c;
  if (!with_delay) {
    c = {gains.kp, gains.kd, 1.0, tau};
  } else if (pade_order == 1) {
    // s^2(tau s+1)(1+phi s/2) + (kp + kd s)(1 - phi s/2)
    const double p = 0.5 * phi;
    c = {gains.kp, gains.kd - gains.kp * p, 1.0 - gains.kd * p, tau + p, tau * p};
  } else {
    // den/num = 1 +- phi s/2 + phi^2 s^2/12
    const double p1 = 0.5 * phi, p2 = phi * phi / 12.0;
    c.assign(6, 0.0);
    // s^2(tau s + 1)(1 + p1 s + p2 s^2)
    c[2] += 1.0;
    c[3] += tau + p1;
    c[4] += tau * p1 + p2;
    c[5] += tau * p2;
    // (kp + kd s)(1 - p1 s + p2 s^2)
    c[0] += gains.kp;
    c[1] += gains.kd - gains.kp * p1;
    c[2] += gains.kp * p2 - gains.kd * p1;
    c[3] += gains.kd * p2;
  }

  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) throw ConfigError("poles: characteristic polynomial is constant");
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (std::abs(c.back()) < 1e-12 * scale)
    throw ConfigError("poles: leading coefficient underflow (ill-conditioned)");

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::VectorXcd eig = companion.eigenvalues();
  std::vector<complexd> out(eig.size());
  for (int i = 0; i < eig.size(); ++i) out[i] = eig[i];
  std::sort(out.begin(), out.end(), [](complexd a, complexd b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a.imag() < b.imag();
  });
  return out;
}

PoleCheck certify(const ControllerGains& gains, const DRegionSpec& spec,
                  const LoopModel& model, double zeta_tol, double sigma_tol) {
  spec.validate();
  PoleCheck out;
  const int order = 1;  // certificates use the first-order rational model
  out.all_poles = poles(gains, model, order);
  const auto anchors = pade_artifact_anchors(model, order);
  const double zeta_min = spec.zeta();

  out.pass = true;
  out.sigma_margin = 1e300;
  out.zeta_margin = 1e300;
  out.radius_margin = 1e300;
  for (const complexd& p : out.all_poles) {
    bool artifact = false;
    for (const complexd& a : anchors)
      if (std::abs(p - a) < 0.25 * std::abs(a)) artifact = true;
    if (artifact) ++out.artifacts_excluded;

    out.sigma_margin = std::min(out.sigma_margin, (-spec.sigma - p.real()) / spec.sigma);
    if (p.real() > -spec.sigma + sigma_tol) out.pass = false;

    if (std::abs(p.imag()) > 1e-12) {
      const double zeta = -p.real() / std::abs(p);
      out.zeta_margin = std::min(out.zeta_margin, (zeta - zeta_min) / zeta_min);
      if (zeta < zeta_min - zeta_tol) out.pass = false;
    }
    if (!artifact) {
      out.radius_margin =
          std::min(out.radius_margin, (spec.omega_b - std::abs(p)) / spec.omega_b);
      if (std::abs(p) > spec.omega_b) out.pass = false;
    }
  }
  return out;
}

bool GainRegion::mask_at(double kp, double kd) const {
  if (mask.empty() || kp < kp_min || kp > kp_max || kd < kd_min || kd > kd_max)
    return false;
  const int ix = std::min(nx - 1, static_cast<int>((kp - kp_min) / (kp_max - kp_min) * nx));
  const int iy = std::min(ny - 1, static_cast<int>((kd - kd_min) / (kd_max - kd_min) * ny));
  return mask[static_cast<std::size_t>(iy) * nx + ix] != 0;
}

double GainRegion::cell_diag() const {
  if (nx == 0 || ny == 0) return 0.0;
  const double cx = (kp_max - kp_min) / nx, cy = (kd_max - kd_min) / ny;
  return std::sqrt(cx * cx + cy * cy);
}

double GainRegion::diameter() const {
  const double dx = kp_max - kp_min, dy = kd_max - kd_min;
  return std::sqrt(dx * dx + dy * dy);
}

GainRegion assemble_region(const DRegionSpec& spec, const LoopModel& model, int resolution) {
  spec.validate();
  model.params.validate();
  if (resolution < 8) throw ConfigError("assemble_region: resolution too small");

  GainRegion region;
  region.spec = spec;
  region.model = model;
  for (Boundary b : {Boundary::sigma, Boundary::damping, Boundary::bandwidth})
    region.curves.push_back(map_crb(b, spec, model, default_grid(b, spec, resolution)));
  region.curves.push_back(map_rrb(Boundary::sigma, spec, model));
  region.curves.push_back(map_rrb(Boundary::bandwidth, spec, model));

  // bracket the feasible set with a coarse scan, then rasterize finely
  auto feasible = [&](double kp, double kd) {
    return certify({kp, kd}, spec, model).pass;
  };
  const double kp_hi_scan = 4.0, kd_hi_scan = 8.0;
  double kp_lo = 1e300, kp_hi = -1e300, kd_lo = 1e300, kd_hi = -1e300;
  bool any = false;
  const int coarse = 72;
  for (int i = 0; i <= coarse; ++i) {
    for (int j = 0; j <= coarse; ++j) {
      const double kp = kp_hi_scan * i / coarse, kd = kd_hi_scan * j / coarse;
      if (feasible(kp, kd)) {
        any = true;
        kp_lo = std::min(kp_lo, kp);
        kp_hi = std::max(kp_hi, kp);
        kd_lo = std::min(kd_lo, kd);
        kd_hi = std::max(kd_hi, kd);
      }
    }
  }
  region.empty = !any;
  if (!any) return region;

  const double pad_kp = std::max(0.05, 0.6 * (kp_hi - kp_lo));
  const double pad_kd = std::max(0.05, 0.6 * (kd_hi - kd_lo));
  region.kp_min = std::max(0.0, kp_lo - pad_kp);
  region.kp_max = kp_hi + pad_kp;
  region.kd_min = std::max(0.0, kd_lo - pad_kd);
  region.kd_max = kd_hi + pad_kd;
  region.nx = std::clamp(resolution / 10, 64, 400);
  region.ny = region.nx;
  region.mask.assign(static_cast<std::size_t>(region.nx) * region.ny, 0);

  ControllerGains best{};
  double best_margin = -1e300;
  bool have_probe = false;
  for (int iy = 0; iy < region.ny; ++iy) {
    const double kd = region.kd_min +
                      (iy + 0.5) * (region.kd_max - region.kd_min) / region.ny;
    for (int ix = 0; ix < region.nx; ++ix) {
      const double kp = region.kp_min +
                        (ix + 0.5) * (region.kp_max - region.kp_min) / region.nx;
      const PoleCheck chk = certify({kp, kd}, spec, model);
      if (!chk.pass) continue;
      region.mask[static_cast<std::size_t>(iy) * region.nx + ix] = 1;
      const double margin =
          std::min({chk.sigma_margin, chk.zeta_margin, chk.radius_margin});
      if (margin > best_margin) {
        best_margin = margin;
        best = {kp, kd};
        have_probe = true;
      }
    }
  }
  region.empty = !have_probe;
  if (!have_probe) return region;
  region.probe = best;
  region.probe_cert = certify(best, spec, model);

  // classify each curve's feasible side by probing along the local normal
  for (BoundaryCurve& curve : region.curves) {
    int votes = 0, total = 0;
    const std::size_t n = curve.points.size();
    for (std::size_t k = 1; k + 1 < n; k += std::max<std::size_t>(1, n / 16)) {
      const double txp = curve.points[k + 1].kp - curve.points[k - 1].kp;
      const double txd = curve.points[k + 1].kd - curve.points[k - 1].kd;
      const double norm = std::hypot(txp, txd);
      if (norm < 1e-12) continue;
      const double step = 2.0 * region.cell_diag();
      const double nxp = -txd / norm * step, nxd = txp / norm * step;
      const bool plus = feasible(curve.points[k].kp + nxp, curve.points[k].kd + nxd);
      const bool minus = feasible(curve.points[k].kp - nxp, curve.points[k].kd - nxd);
      if (plus == minus) continue;
      votes += plus ? 1 : -1;
      ++total;
    }
    curve.feasible_side = total == 0 ? 0 : (votes > 0 ? 1 : (votes < 0 ? -1 : 0));
  }
  return region;
}

Membership region_membership(const ControllerGains& gains, const GainRegion& region) {
  Membership m;
  m.pole_test = !region.empty && certify(gains, region.spec, region.model).pass;
  m.geometric = region.mask_at(gains.kp, gains.kd);
  m.agree = m.pole_test == m.geometric;
  return m;
}

bool in_region(const ControllerGains& gains, const GainRegion& region) {
  return region_membership(gains, region).pole_test;
}

bool in_region_tol(const ControllerGains& gains, const GainRegion& region, double tol) {
  if (in_region(gains, region)) return true;
  for (double r : {0.25 * tol, 0.5 * tol, 0.75 * tol, tol}) {
    for (int k = 0; k < 32; ++k) {
      const double th = 2.0 * M_PI * k / 32.0;
      const ControllerGains g{gains.kp + r * std::cos(th), gains.kd + r * std::sin(th)};
      if (g.kp < 0.0 || g.kd < 0.0) continue;
      if (certify(g, region.spec, region.model).pass) return true;
    }
  }
  return false;
}

std::string region_json(const GainRegion& region) {
  nlohmann::json doc;
  doc["sigma"] = region.spec.sigma;
  doc["theta_deg"] = region.spec.theta_deg;
  doc["omega_b"] = region.spec.omega_b;
  doc["delay_mode"] = to_string(region.model.delay_mode);
  doc["empty"] = region.empty;
  if (!region.empty) {
    doc["probe"] = {{"kp", region.probe.kp}, {"kd", region.probe.kd}};
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : region.probe_cert.all_poles)
      ps.push_back({{"re", p.real()}, {"im", p.imag()}});
    doc["probe_poles"] = ps;
    doc["probe_margins"] = {{"sigma", region.probe_cert.sigma_margin},
                            {"zeta", region.probe_cert.zeta_margin},
                            {"radius", region.probe_cert.radius_margin}};
    doc["box"] = {{"kp_min", region.kp_min},
                  {"kp_max", region.kp_max},
                  {"kd_min", region.kd_min},
                  {"kd_max", region.kd_max}};
  }
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : region.curves)
    curves.push_back({{"label", c.label},
                      {"points", c.points.size()},
                      {"feasible_side", c.feasible_side},
                      {"skipped_singular", c.skipped_singular}});
  doc["curves"] = curves;
  return doc.dump(2);
}

void write_region_csv(const GainRegion& region, std::ostream& out) {
  out << "label,parameter,kp,kd\n";
  char buf[96];
  for (const auto& c : region.curves) {
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", c.label.c_str(),
                    c.parameter[k], c.points[k].kp, c.points[k].kd);
      out << buf;
    }
  }
}

}  // namespace cacc::design
