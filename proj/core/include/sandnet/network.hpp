#pragma once

#include "sandnet/error.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace sandnet {

/// 1-based node index; ids are dense in [1, size()].
using NodeId = std::int32_t;
/// Particle count (hospitalised patients) at a node.
using Height = std::int64_t;

enum class Neighborhood : std::uint8_t { VonNeumann, Moore };

struct GridSpec {
    int side = 1;
    Neighborhood neighborhood = Neighborhood::VonNeumann;
};

/// Nominal neighbor-slot count of a grid cell (4 von Neumann, 8 Moore).
int nominal_slots(Neighborhood nb);

/// Row-major cell id, rows and columns counted from 1.
NodeId index_of(const GridSpec& spec, int row, int col);

/// Inverse of index_of.
std::pair<int, int> position_of(const GridSpec& spec, NodeId id);

/// Finite simple connected undirected network with an optional hub,
/// per-node capacity thresholds and precomputed sorted adjacency.
/// Immutable after construction; safe to share across threads.
class Network {
public:
    /// Square grid of side*side cells, row-major ids. Every cell gets the
    /// nominal threshold; boundary cells keep their missing off-grid
    /// neighbors as external slots. Odd side puts the hub at the center;
    /// require_hub on an even side is an error.
    static Network grid(const GridSpec& spec, bool require_hub = false);

    /// General graph. Thresholds default to the degrees; explicit values
    /// below the degree (or below 1) are rejected.
    static Network graph(int node_count, std::vector<std::pair<NodeId, NodeId>> edges,
                         std::optional<NodeId> hub = std::nullopt,
                         std::optional<std::vector<Height>> thresholds = std::nullopt);

    int size() const { return node_count_; }
    std::optional<NodeId> hub() const { return hub_; }
    bool has_hub() const { return hub_.has_value(); }

    Height threshold(NodeId v) const { return thresholds_[check(v) - 1]; }
    const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[check(v) - 1]; }
    int degree(NodeId v) const { return static_cast<int>(adjacency_[check(v) - 1].size()); }
    /// Slots pointing outside the network: threshold minus degree.
    int off_slots(NodeId v) const { return off_slots_[check(v) - 1]; }

    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::optional<GridSpec>& grid_spec() const { return grid_spec_; }
    bool is_grid() const { return grid_spec_.has_value(); }

    /// Sum of (threshold - 1): the largest total load any stable (resp.
    /// almost-stable outside the hub) configuration can carry.
    Height capacity_sum() const { return capacity_sum_; }

    bool operator==(const Network& other) const;

private:
    Network() = default;
    void finalize();

    NodeId check(NodeId v) const {
        if (v < 1 || v > node_count_) fail(ErrorCode::UnknownNode, "node id " + std::to_string(v));
        return v;
    }

    int node_count_ = 0;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::optional<NodeId> hub_;
    std::vector<Height> thresholds_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<int> off_slots_;
    std::optional<GridSpec> grid_spec_;
    Height capacity_sum_ = 0;
};

} // namespace sandnet
