#pragma once

#include "sandnet/heights.hpp"
#include "sandnet/rational.hpp"

#include <vector>

namespace sandnet {

/// Inflow-weighted load indicator, kept exact: numerator = inflow . heights,
/// denominator = total inflow. Lower is better.
using IndicatorValue = Rational;

IndicatorValue indicator(const Perturbation& inflow, const Configuration& heights);

/// Nodes near saturation. near_capacity holds threshold-margin <= z < threshold,
/// overflow holds z >= threshold; the two lists are disjoint and ascending.
struct CriticalReport {
    Height margin = 2;
    std::vector<NodeId> near_capacity;
    std::vector<NodeId> overflow;

    std::size_t count() const { return near_capacity.size(); }
};

CriticalReport critical_points(const Network& net, const Configuration& heights, Height margin = 2);

struct OccupancySummary {
    Height total = 0;
    Height max = 0;
    double mean_fraction = 0.0;
    std::vector<double> fractions; // per-node z / threshold
};

OccupancySummary occupancy_summary(const Network& net, const Configuration& heights);

} // namespace sandnet
