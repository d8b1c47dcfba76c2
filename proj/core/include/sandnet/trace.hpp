#pragma once

#include "sandnet/network.hpp"

#include <utility>
#include <vector>

namespace sandnet {

/// One toppling: removed = threshold(node); every in-network neighbor
/// delivery is listed; external slots go to the hub or are lost, so
/// removed == sum(deliveries) + to_hub + lost holds per event.
struct ToppleEvent {
    int index = 0;
    NodeId node = 0;
    Height removed = 0;
    std::vector<std::pair<NodeId, Height>> deliveries;
    Height to_hub = 0;
    Height lost = 0;
};

/// Ordered audit record of a cascade.
struct CascadeTrace {
    std::vector<ToppleEvent> events;
    std::vector<Height> topple_counts; // per node, index id-1
    Height topplings = 0;
    Height lost = 0;
    Height hub_receipts = 0; // boundary particles rerouted to the hub
    Height hub_peak = 0;     // highest hub height seen during the cascade

    bool touched_boundary() const {
        for (const auto& e : events)
            if (e.to_hub > 0 || e.lost > 0) return true;
        return false;
    }
};

/// One single-particle transfer of the standard workflow. hub_fallback
/// marks particles rerouted to the hub because every neighbor of `from`
/// was already at threshold-1 or above.
struct Move {
    NodeId from = 0;
    NodeId to = 0;
    bool hub_fallback = false;
};

/// Replays a cascade trace on top of a starting configuration. Used by
/// tests and by intermediate-state reconstruction; `upto` limits how many
/// events are applied (negative = all).
Configuration replay_trace(const Network& net, Configuration start, const CascadeTrace& trace,
                           int upto = -1);

} // namespace sandnet
