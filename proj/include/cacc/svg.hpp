#pragma once

#include <string>
#include <vector>

#include "cacc/convoy.hpp"
#include "cacc/design.hpp"
#include "cacc/metrics.hpp"

namespace cacc::svg {

/// Stacked position/velocity/acceleration/jerk panels, one polyline per
/// vehicle.
std::string timeseries(const ConvoyTrace& trace, const std::string& title);

/// Six-axis radar chart of the normalized scores, one polygon per vehicle.
/// Axes run response time, bump, kick, stumble, jerk, VDV; 10 at the rim.
std::string spider(const std::vector<DriveabilityScores>& scores, const std::string& title);

/// Gain-plane plot: feasible cells shaded, boundary curves drawn, probe
/// marked; `marked` adds one extra highlighted gain pair.
std::string region(const design::GainRegion& region,
                   const std::vector<ControllerGains>& marked, const std::string& title);

}  // namespace cacc::svg
