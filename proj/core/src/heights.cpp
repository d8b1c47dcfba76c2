#include "sandnet/heights.hpp"

#include "sandnet/error.hpp"

#include <numeric>

namespace sandnet {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        fail(ErrorCode::LengthMismatch,
             std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

void check_nonnegative(const Perturbation& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < 0)
            fail(ErrorCode::ValidationError, std::string(what) + " negative at node " +
                                                 std::to_string(i + 1));
}

} // namespace

Configuration add_inflow(const Configuration& heights, const Perturbation& inflow) {
    check_lengths(heights.size(), inflow.size(), "configuration vs inflow");
    check_nonnegative(inflow, "inflow");
    Configuration out = heights;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += inflow[i];
    return out;
}

Configuration dissipate(const Configuration& heights, const Perturbation& removal) {
    check_lengths(heights.size(), removal.size(), "configuration vs removal");
    check_nonnegative(removal, "removal");
    Configuration out = heights;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] -= removal[i];
        if (out[i] < 0)
            fail(ErrorCode::Oversubtraction,
                 "node " + std::to_string(i + 1) + ": removing " + std::to_string(removal[i]) +
                     " from " + std::to_string(heights[i]));
    }
    return out;
}

Height total(const Configuration& heights) {
    return std::accumulate(heights.begin(), heights.end(), Height{0});
}

std::vector<NodeId> unstable_nodes(const Network& net, const Configuration& heights) {
    check_lengths(heights.size(), static_cast<std::size_t>(net.size()), "configuration vs network");
    std::vector<NodeId> out;
    for (NodeId v = 1; v <= net.size(); ++v)
        if (heights[v - 1] >= net.threshold(v)) out.push_back(v);
    return out;
}

bool is_stable(const Network& net, const Configuration& heights) {
    check_lengths(heights.size(), static_cast<std::size_t>(net.size()), "configuration vs network");
    for (NodeId v = 1; v <= net.size(); ++v)
        if (heights[v - 1] >= net.threshold(v)) return false;
    return true;
}

bool is_almost_stable(const Network& net, const Configuration& heights) {
    check_lengths(heights.size(), static_cast<std::size_t>(net.size()), "configuration vs network");
    for (NodeId v = 1; v <= net.size(); ++v) {
        if (net.hub() && *net.hub() == v) continue;
        if (heights[v - 1] >= net.threshold(v)) return false;
    }
    return true;
}

} // namespace sandnet
