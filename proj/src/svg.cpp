#include "cacc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cacc::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Canvas {
  std::ostringstream out;
  double w, h;

  Canvas(double w_, double h_) : w(w_), h(h_) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 12,
            const char* anchor = "start") {
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* color = "#888",
            double width = 1.0) {
    out << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color << "\" stroke-width=\""
        << width << "\"/>\n";
  }
  void poly(const std::vector<std::pair<double, double>>& pts, const char* color,
            double width = 1.2, const char* fill = "none", double opacity = 1.0) {
    out << "<polyline points=\"";
    for (auto& [x, y] : pts) out << fmt(x) << ',' << fmt(y) << ' ';
    out << "\" fill=\"" << fill << "\" stroke=\"" << color << "\" stroke-width=\"" << width
        << "\" opacity=\"" << opacity << "\"/>\n";
  }
  void circle(double x, double y, double r, const char* color) {
    out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << r
        << "\" fill=\"" << color << "\"/>\n";
  }
  void rect(double x, double y, double w_, double h_, const char* color, double opacity) {
    out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w_)
        << "\" height=\"" << fmt(h_) << "\" fill=\"" << color << "\" opacity=\""
        << opacity << "\"/>\n";
  }
  std::string finish() {
    out << "</svg>\n";
    return out.str();
  }
};

struct Range {
  double lo = 1e300, hi = -1e300;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi <= lo) hi = lo + 1.0;
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

}  // namespace

std::string timeseries(const ConvoyTrace& trace, const std::string& title) {
  const double W = 860, panelH = 170, left = 70, right = 20, top = 40, gap = 26;
  const char* names[] = {"position [m]", "velocity [m/s]", "acceleration [m/s2]",
                         "jerk [m/s3]"};
  Canvas cv(W, top + 4 * (panelH + gap));
  cv.text(left, 22, title, 14);
  const double tmax = trace.times.back();

  for (int p = 0; p < 4; ++p) {
    const double y0 = top + p * (panelH + gap);
    Range r;
    for (const auto& ch : trace.vehicles) {
      const std::vector<double>& series =
          p == 0 ? ch.position : p == 1 ? ch.velocity : p == 2 ? ch.acceleration : ch.jerk;
      for (double v : series) r.add(v);
    }
    r.pad();
    auto X = [&](double t) { return left + t / tmax * (W - left - right); };
    auto Y = [&](double v) { return y0 + panelH - (v - r.lo) / (r.hi - r.lo) * panelH; };
    cv.line(left, y0, left, y0 + panelH);
    cv.line(left, y0 + panelH, W - right, y0 + panelH);
    if (r.lo < 0 && r.hi > 0) cv.line(left, Y(0), W - right, Y(0), "#ccc");
    cv.text(left - 6, y0 + 10, fmt(r.hi), 10, "end");
    cv.text(left - 6, y0 + panelH, fmt(r.lo), 10, "end");
    cv.text(left, y0 - 6, names[p], 11);
    for (int i = 0; i < trace.n_vehicles(); ++i) {
      const auto& ch = trace.vehicles[i];
      const std::vector<double>& series =
          p == 0 ? ch.position : p == 1 ? ch.velocity : p == 2 ? ch.acceleration : ch.jerk;
      std::vector<std::pair<double, double>> pts;
      const std::size_t stride = std::max<std::size_t>(1, series.size() / 1200);
      for (std::size_t k = 0; k < series.size(); k += stride)
        pts.emplace_back(X(trace.times[k]), Y(series[k]));
      cv.poly(pts, kPalette[i % 8]);
    }
  }
  for (int i = 0; i < trace.n_vehicles(); ++i) {
    cv.circle(left + 90.0 * i + 6, 32, 4, kPalette[i % 8]);
    cv.text(left + 90.0 * i + 14, 36, "vehicle " + std::to_string(i), 11);
  }
  cv.text(W - right, top + 4 * (panelH + gap) - 8, "t [s]", 11, "end");
  return cv.finish();
}

std::string spider(const std::vector<DriveabilityScores>& scores, const std::string& title) {
  const double W = 560, H = 560, cx = W / 2, cy = H / 2 + 14, R = 200;
  const char* axes[] = {"response time", "bump", "kick", "stumble", "jerk", "VDV"};
  Canvas cv(W, H);
  cv.text(cx, 24, title, 14, "middle");
  auto point = [&](int axis, double score) {
    const double ang = -M_PI / 2 + axis * M_PI / 3.0;
    const double rr = R * score / 10.0;
    return std::pair<double, double>{cx + rr * std::cos(ang), cy + rr * std::sin(ang)};
  };
  for (int ring = 1; ring <= 5; ++ring) {
    std::vector<std::pair<double, double>> pts;
    for (int a = 0; a <= 6; ++a) pts.push_back(point(a % 6, 2.0 * ring));
    cv.poly(pts, "#ddd", 0.8);
  }
  for (int a = 0; a < 6; ++a) {
    auto [x, y] = point(a, 10.0);
    cv.line(cx, cy, x, y, "#bbb");
    auto [tx, ty] = point(a, 11.6);
    cv.text(tx, ty, axes[a], 11, "middle");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (int a = 0; a <= 6; ++a) pts.push_back(point(a % 6, scores[i].normalized[a % 6]));
    cv.poly(pts, kPalette[i % 8], 1.6, kPalette[i % 8], 0.85);
    cv.circle(40, 40.0 + 18 * i, 4, kPalette[i % 8]);
    cv.text(50, 44.0 + 18 * i, "vehicle " + std::to_string(i), 11);
  }
  return cv.finish();
}

std::string region(const design::GainRegion& region,
                   const std::vector<ControllerGains>& marked, const std::string& title) {
  const double W = 640, H = 600, left = 80, right = 30, top = 50, bottom = 50;
  Canvas cv(W, H);
  cv.text(left, 24, title, 14);
  if (region.empty) {
    cv.text(W / 2, H / 2, "empty region", 16, "middle");
    return cv.finish();
  }
  const double plotW = W - left - right, plotH = H - top - bottom;
  auto X = [&](double kd) {
    return left + (kd - region.kd_min) / (region.kd_max - region.kd_min) * plotW;
  };
  auto Y = [&](double kp) {
    return top + plotH - (kp - region.kp_min) / (region.kp_max - region.kp_min) * plotH;
  };
  const double cw = plotW / region.nx, chh = plotH / region.ny;
  for (int iy = 0; iy < region.ny; ++iy)
    for (int ix = 0; ix < region.nx; ++ix)
      if (region.mask[static_cast<std::size_t>(iy) * region.nx + ix]) {
        const double kp = region.kp_min + (ix + 0.5) * (region.kp_max - region.kp_min) / region.nx;
        const double kd = region.kd_min + (iy + 0.5) * (region.kd_max - region.kd_min) / region.ny;
        cv.rect(X(kd) - cw / 2, Y(kp) - chh / 2, cw + 0.5, chh + 0.5, "#9ecae1", 0.7);
      }
  const char* curveColor[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  int ci = 0;
  for (const auto& c : region.curves) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& g : c.points) {
      if (g.kd < region.kd_min || g.kd > region.kd_max || g.kp < region.kp_min ||
          g.kp > region.kp_max) {
        if (pts.size() > 1) cv.poly(pts, curveColor[ci % 5]);
        pts.clear();
        continue;
      }
      pts.emplace_back(X(g.kd), Y(g.kp));
    }
    if (pts.size() > 1) cv.poly(pts, curveColor[ci % 5]);
    cv.circle(left + 10, top + 14.0 * ci + 8, 3, curveColor[ci % 5]);
    cv.text(left + 18, top + 14.0 * ci + 12, c.label, 10);
    ++ci;
  }
  cv.circle(X(region.probe.kd), Y(region.probe.kp), 4, "#000");
  cv.text(X(region.probe.kd) + 8, Y(region.probe.kp), "probe", 10);
  for (const auto& g : marked) {
    cv.circle(X(g.kd), Y(g.kp), 5, "#e41a1c");
    cv.text(X(g.kd) + 8, Y(g.kp) + 4,
            "(" + fmt(g.kp) + ", " + fmt(g.kd) + ")", 10);
  }
  cv.line(left, top + plotH, left + plotW, top + plotH);
  cv.line(left, top, left, top + plotH);
  cv.text(left + plotW / 2, H - 14, "kd", 12, "middle");
  cv.text(20, top + plotH / 2, "kp", 12);
  cv.text(left, top + plotH + 16, fmt(region.kd_min), 10);
  cv.text(left + plotW, top + plotH + 16, fmt(region.kd_max), 10, "end");
  cv.text(left - 6, top + plotH, fmt(region.kp_min), 10, "end");
  cv.text(left - 6, top + 10, fmt(region.kp_max), 10, "end");
  return cv.finish();
}

}  // namespace cacc::svg
