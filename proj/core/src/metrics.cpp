#include "sandnet/metrics.hpp"

#include "sandnet/error.hpp"

namespace sandnet {

IndicatorValue indicator(const Perturbation& inflow, const Configuration& heights) {
    if (inflow.size() != heights.size())
        fail(ErrorCode::LengthMismatch, "inflow " + std::to_string(inflow.size()) + " vs heights " +
                                            std::to_string(heights.size()));
    Height dot = 0, inflow_total = 0;
    for (std::size_t i = 0; i < inflow.size(); ++i) {
        if (inflow[i] < 0)
            fail(ErrorCode::ValidationError, "inflow negative at node " + std::to_string(i + 1));
        dot += inflow[i] * heights[i];
        inflow_total += inflow[i];
    }
    if (inflow_total == 0) fail(ErrorCode::ZeroInflow, "indicator needs a nonzero inflow");
    return IndicatorValue{dot, inflow_total};
}

CriticalReport critical_points(const Network& net, const Configuration& heights, Height margin) {
    if (margin < 0) fail(ErrorCode::ValidationError, "margin must be nonnegative");
    if (static_cast<int>(heights.size()) != net.size())
        fail(ErrorCode::LengthMismatch, "configuration vs network");
    CriticalReport report;
    report.margin = margin;
    for (NodeId v = 1; v <= net.size(); ++v) {
        const Height h = heights[v - 1];
        const Height cap = net.threshold(v);
        if (h >= cap)
            report.overflow.push_back(v);
        else if (h >= cap - margin)
            report.near_capacity.push_back(v);
    }
    return report;
}

OccupancySummary occupancy_summary(const Network& net, const Configuration& heights) {
    if (static_cast<int>(heights.size()) != net.size())
        fail(ErrorCode::LengthMismatch, "configuration vs network");
    OccupancySummary summary;
    summary.fractions.reserve(heights.size());
    double fraction_sum = 0.0;
    for (NodeId v = 1; v <= net.size(); ++v) {
        const Height h = heights[v - 1];
        summary.total += h;
        summary.max = std::max(summary.max, h);
        const double f = static_cast<double>(h) / static_cast<double>(net.threshold(v));
        summary.fractions.push_back(f);
        fraction_sum += f;
    }
    summary.mean_fraction = net.size() > 0 ? fraction_sum / net.size() : 0.0;
    return summary;
}

} // namespace sandnet
