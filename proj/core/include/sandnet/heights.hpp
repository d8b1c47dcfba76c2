#pragma once

#include "sandnet/network.hpp"

#include <vector>

namespace sandnet {

/// Per-node height vector, index i-1 holds node i.
using Configuration = std::vector<Height>;
/// Nonnegative per-node inflow (or removal) vector, same layout.
using Perturbation = std::vector<Height>;

/// Component-wise sum; inputs untouched.
Configuration add_inflow(const Configuration& heights, const Perturbation& inflow);

/// Component-wise difference. Rejects any node where removal exceeds the
/// available height, naming the offender.
Configuration dissipate(const Configuration& heights, const Perturbation& removal);

Height total(const Configuration& heights);

/// Nodes at or above their threshold, ascending.
std::vector<NodeId> unstable_nodes(const Network& net, const Configuration& heights);

/// Every node strictly below threshold.
bool is_stable(const Network& net, const Configuration& heights);

/// Every node except the hub strictly below threshold.
bool is_almost_stable(const Network& net, const Configuration& heights);

} // namespace sandnet
