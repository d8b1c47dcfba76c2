#include "sandnet/network.hpp"

#include <algorithm>
#include <queue>

namespace sandnet {

int nominal_slots(Neighborhood nb) {
    return nb == Neighborhood::VonNeumann ? 4 : 8;
}

NodeId index_of(const GridSpec& spec, int row, int col) {
    const int n = spec.side;
    if (n < 1) fail(ErrorCode::ValidationError, "grid side must be >= 1");
    if (row < 1 || row > n || col < 1 || col > n)
        fail(ErrorCode::OutOfRange, "(" + std::to_string(row) + "," + std::to_string(col) +
                                        ") outside " + std::to_string(n) + "x" + std::to_string(n));
    return static_cast<NodeId>((row - 1) * n + col);
}

std::pair<int, int> position_of(const GridSpec& spec, NodeId id) {
    const int n = spec.side;
    if (n < 1) fail(ErrorCode::ValidationError, "grid side must be >= 1");
    if (id < 1 || id > n * n) fail(ErrorCode::OutOfRange, "node id " + std::to_string(id));
    return {(id - 1) / n + 1, (id - 1) % n + 1};
}

Network Network::grid(const GridSpec& spec, bool require_hub) {
    const int n = spec.side;
    if (n < 1) fail(ErrorCode::ValidationError, "grid side must be >= 1");
    if (require_hub && n % 2 == 0)
        fail(ErrorCode::EvenSideWithHub, "side " + std::to_string(n) + " has no center cell");

    Network net;
    net.node_count_ = n * n;
    net.grid_spec_ = spec;
    const bool moore = spec.neighborhood == Neighborhood::Moore;
    for (int r = 1; r <= n; ++r) {
        for (int c = 1; c <= n; ++c) {
            const NodeId id = index_of(spec, r, c);
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (!moore && dr != 0 && dc != 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 1 || rr > n || cc < 1 || cc > n) continue;
                    const NodeId other = index_of(spec, rr, cc);
                    if (id < other) net.edges_.emplace_back(id, other);
                }
            }
        }
    }
    net.thresholds_.assign(net.node_count_, nominal_slots(spec.neighborhood));
    if (n % 2 == 1) net.hub_ = static_cast<NodeId>((n * n + 1) / 2);
    net.finalize();
    return net;
}

Network Network::graph(int node_count, std::vector<std::pair<NodeId, NodeId>> edges,
                       std::optional<NodeId> hub, std::optional<std::vector<Height>> thresholds) {
    if (node_count < 1) fail(ErrorCode::ValidationError, "node count must be >= 1");

    for (auto& [u, v] : edges) {
        if (u < 1 || u > node_count || v < 1 || v > node_count)
            fail(ErrorCode::UnknownNode,
                 "edge (" + std::to_string(u) + "," + std::to_string(v) + ") endpoint outside [1," +
                     std::to_string(node_count) + "]");
        if (u == v) fail(ErrorCode::SelfLoop, "node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
        fail(ErrorCode::DuplicateEdge,
             "(" + std::to_string(dup->first) + "," + std::to_string(dup->second) + ")");

    Network net;
    net.node_count_ = node_count;
    net.edges_ = std::move(edges);
    if (hub) {
        if (*hub < 1 || *hub > node_count)
            fail(ErrorCode::UnknownNode, "hub " + std::to_string(*hub));
        net.hub_ = hub;
    }

    std::vector<Height> degree(node_count, 0);
    for (const auto& [u, v] : net.edges_) {
        ++degree[u - 1];
        ++degree[v - 1];
    }
    if (thresholds) {
        if (static_cast<int>(thresholds->size()) != node_count)
            fail(ErrorCode::LengthMismatch, "thresholds has " + std::to_string(thresholds->size()) +
                                                " entries for " + std::to_string(node_count) +
                                                " nodes");
        for (int i = 0; i < node_count; ++i) {
            const Height floor = std::max<Height>(degree[i], 1);
            if ((*thresholds)[i] < floor)
                fail(ErrorCode::ThresholdBelowDegree,
                     "node " + std::to_string(i + 1) + " threshold " +
                         std::to_string((*thresholds)[i]) + " < " + std::to_string(floor));
        }
        net.thresholds_ = std::move(*thresholds);
    } else {
        net.thresholds_.resize(node_count);
        for (int i = 0; i < node_count; ++i) net.thresholds_[i] = std::max<Height>(degree[i], 1);
    }
    net.finalize();

    // BFS from node 1; every node must be reachable.
    std::vector<char> seen(node_count, 0);
    std::queue<NodeId> frontier;
    frontier.push(1);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const NodeId v = frontier.front();
        frontier.pop();
        for (NodeId u : net.adjacency_[v - 1]) {
            if (!seen[u - 1]) {
                seen[u - 1] = 1;
                ++reached;
                frontier.push(u);
            }
        }
    }
    if (reached != node_count) {
        NodeId missing = 0;
        for (int i = 0; i < node_count; ++i)
            if (!seen[i]) {
                missing = i + 1;
                break;
            }
        fail(ErrorCode::Disconnected, "node " + std::to_string(missing) + " unreachable from 1");
    }
    return net;
}

void Network::finalize() {
    std::sort(edges_.begin(), edges_.end());
    adjacency_.assign(node_count_, {});
    for (const auto& [u, v] : edges_) {
        adjacency_[u - 1].push_back(v);
        adjacency_[v - 1].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    off_slots_.resize(node_count_);
    capacity_sum_ = 0;
    for (int i = 0; i < node_count_; ++i) {
        off_slots_[i] = static_cast<int>(thresholds_[i]) - static_cast<int>(adjacency_[i].size());
        capacity_sum_ += thresholds_[i] - 1;
    }
}

bool Network::operator==(const Network& other) const {
    return node_count_ == other.node_count_ && edges_ == other.edges_ && hub_ == other.hub_ &&
           thresholds_ == other.thresholds_;
}

} // namespace sandnet
