#include "sandnet/standard.hpp"

#include "step_common.hpp"

#include <algorithm>

namespace sandnet {

namespace {

// Occupancy order by exact fraction height/threshold; equal thresholds
// reduce to plain height comparison.
bool more_crowded(const Network& net, const Configuration& z, NodeId a, NodeId b) {
    return z[a - 1] * net.threshold(b) > z[b - 1] * net.threshold(a);
}

NodeId pick_destination(const Network& net, const Configuration& z,
                        const std::vector<NodeId>& candidates, TieBreak tiebreak, Rng& rng) {
    std::vector<NodeId> best;
    for (NodeId u : candidates) {
        if (best.empty()) {
            best.push_back(u);
        } else if (more_crowded(net, z, best.front(), u)) {
            best.assign(1, u);
        } else if (!more_crowded(net, z, u, best.front())) {
            best.push_back(u); // tie, candidates arrive in ascending id order
        }
    }
    if (best.size() == 1 || !tiebreak.random) return best.front();
    return best[rng.below(best.size())];
}

bool everyone_full(const Network& net, const Configuration& z, const std::vector<NodeId>& nodes) {
    return std::all_of(nodes.begin(), nodes.end(),
                       [&](NodeId u) { return z[u - 1] >= net.threshold(u) - 1; });
}

RedistributionOutcome redistribute_in_place(const Network& net, Configuration& z, NodeId v,
                                            TieBreak tiebreak, Rng& rng, std::vector<Move>& moves) {
    if (v < 1 || v > net.size()) fail(ErrorCode::UnknownNode, "node id " + std::to_string(v));
    if (z[v - 1] < net.threshold(v))
        fail(ErrorCode::NotUnstable, "node " + std::to_string(v) + " holds " +
                                         std::to_string(z[v - 1]) + " < threshold " +
                                         std::to_string(net.threshold(v)));
    const auto& nbrs = net.neighbors(v);
    Height excess = z[v - 1] - (net.threshold(v) - 1);
    Height held = 0;
    while (excess > 0) {
        NodeId dest;
        bool fallback = false;
        if (nbrs.empty() || everyone_full(net, z, nbrs)) {
            if (!net.hub()) fail(ErrorCode::NoHub, "all neighbors of " + std::to_string(v) +
                                                       " are full and there is no hub");
            dest = *net.hub();
            fallback = true;
            if (dest == v) {
                // A saturated hub has nowhere to send its own excess.
                held = excess;
                break;
            }
        } else {
            dest = pick_destination(net, z, nbrs, tiebreak, rng);
        }
        z[v - 1] -= 1;
        z[dest - 1] += 1;
        moves.push_back(Move{v, dest, fallback});
        --excess;
    }
    return RedistributionOutcome{{}, {}, held};
}

} // namespace

RedistributionOutcome redistribute_node(const Network& net, const Configuration& heights, NodeId v,
                                        TieBreak tiebreak, Rng* rng) {
    if (static_cast<int>(heights.size()) != net.size())
        fail(ErrorCode::LengthMismatch, "configuration vs network");
    Rng local(tiebreak.seed);
    Rng& gen = rng ? *rng : local;
    Configuration z = heights;
    std::vector<Move> moves;
    const Height held = redistribute_in_place(net, z, v, tiebreak, gen, moves).held;
    return RedistributionOutcome{std::move(z), std::move(moves), held};
}

StepReport standard_step(std::shared_ptr<const Network> net, const Configuration& ground,
                         const Perturbation& inflow, TieBreak tiebreak,
                         const RemovalProvider& removal, const StepOptions& opts, Rng* rng) {
    detail::require_step_inputs(net, ground, inflow);
    const Network& g = *net;
    Rng local(tiebreak.seed);
    Rng& gen = rng ? *rng : local;

    Configuration z = add_inflow(ground, inflow);
    const Configuration initial = z;
    std::vector<Move> moves;
    Height held_total = 0;
    Height hub_peak = g.hub() ? z[*g.hub() - 1] : 0;
    bool hub_stuck = false;

    while (true) {
        NodeId target = 0;
        if (g.hub() && !hub_stuck && z[*g.hub() - 1] >= g.threshold(*g.hub())) {
            target = *g.hub();
        } else {
            for (NodeId v = 1; v <= g.size(); ++v) {
                if (g.hub() && *g.hub() == v) continue;
                if (z[v - 1] >= g.threshold(v)) {
                    target = v;
                    break;
                }
            }
        }
        if (target == 0) break;
        if (static_cast<Height>(moves.size()) >= opts.max_moves)
            fail(ErrorCode::NonTermination,
                 "move cap " + std::to_string(opts.max_moves) + " exceeded");
        const Height held = redistribute_in_place(g, z, target, tiebreak, gen, moves).held;
        if (held > 0) {
            held_total += held;
            hub_stuck = true; // neighbors never drop below threshold-1 again
        }
        if (g.hub()) hub_peak = std::max(hub_peak, z[*g.hub() - 1]);
    }

    Perturbation zeta = removal ? removal(z) : Perturbation(static_cast<std::size_t>(g.size()), 0);
    CascadeTrace empty_trace;
    empty_trace.topple_counts.assign(g.size(), 0);
    return detail::assemble_step(std::move(net), opts.step_index, opts.critical_margin, inflow,
                                 initial, std::move(z), std::move(zeta), std::move(empty_trace),
                                 std::move(moves), held_total, hub_peak);
}

StepReport standard_step(std::shared_ptr<const Network> net, const Configuration& ground,
                         const Perturbation& inflow, TieBreak tiebreak,
                         const std::optional<Perturbation>& removal, const StepOptions& opts,
                         Rng* rng) {
    RemovalProvider provider;
    if (removal) provider = [zeta = *removal](const Configuration&) { return zeta; };
    return standard_step(std::move(net), ground, inflow, tiebreak, provider, opts, rng);
}

} // namespace sandnet
