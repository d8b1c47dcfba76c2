#include "sandnet/cascade.hpp"

#include "step_common.hpp"

#include <algorithm>

namespace sandnet {

namespace {

// Fires v in place and appends the event. Callers guarantee v is unstable
// and, for hub redistribution, that a hub exists.
void fire(const Network& net, Configuration& z, NodeId v, BoundaryPolicy policy,
          CascadeTrace& trace) {
    ToppleEvent e;
    e.index = static_cast<int>(trace.events.size());
    e.node = v;
    e.removed = net.threshold(v);
    z[v - 1] -= e.removed;
    const auto& nbrs = net.neighbors(v);
    e.deliveries.reserve(nbrs.size());
    for (NodeId u : nbrs) {
        z[u - 1] += 1;
        e.deliveries.emplace_back(u, 1);
    }
    const Height off = net.off_slots(v);
    if (off > 0) {
        if (policy == BoundaryPolicy::RedistributeToHub) {
            z[*net.hub() - 1] += off;
            e.to_hub = off;
            trace.hub_receipts += off;
        } else {
            e.lost = off;
            trace.lost += off;
        }
    }
    ++trace.topplings;
    ++trace.topple_counts[v - 1];
    if (net.hub()) trace.hub_peak = std::max(trace.hub_peak, z[*net.hub() - 1]);
    trace.events.push_back(std::move(e));
}

// Lowest unstable id >= from, hub excluded when skip_hub; 0 when none.
NodeId lowest_unstable(const Network& net, const Configuration& z, NodeId from, bool skip_hub) {
    for (NodeId v = std::max<NodeId>(from, 1); v <= net.size(); ++v) {
        if (skip_hub && net.hub() && *net.hub() == v) continue;
        if (z[v - 1] >= net.threshold(v)) return v;
    }
    return 0;
}

// After firing v only v and its neighbors changed, so the next scan can
// start at the smallest touched id.
NodeId rescan_from(const Network& net, NodeId v) {
    const auto& nbrs = net.neighbors(v);
    return nbrs.empty() ? v : std::min(v, nbrs.front());
}

void check_config(const Network& net, const Configuration& z) {
    if (static_cast<int>(z.size()) != net.size())
        fail(ErrorCode::LengthMismatch, "configuration vs network");
}

} // namespace

ToppleOutcome topple_once(const Network& net, const Configuration& heights, NodeId v,
                          BoundaryPolicy policy) {
    check_config(net, heights);
    if (policy == BoundaryPolicy::RedistributeToHub && !net.hub())
        fail(ErrorCode::NoHub, "redistribution needs a hub");
    if (v < 1 || v > net.size()) fail(ErrorCode::UnknownNode, "node id " + std::to_string(v));
    if (heights[v - 1] < net.threshold(v))
        fail(ErrorCode::NotUnstable, "node " + std::to_string(v) + " holds " +
                                         std::to_string(heights[v - 1]) + " < threshold " +
                                         std::to_string(net.threshold(v)));
    CascadeTrace trace;
    trace.topple_counts.assign(net.size(), 0);
    Configuration z = heights;
    fire(net, z, v, policy, trace);
    return ToppleOutcome{std::move(z), trace.events.front().to_hub, trace.events.front().lost};
}

std::pair<Configuration, CascadeTrace> stabilize_open(const Network& net, Configuration heights,
                                                      const StabilizeOptions& opts) {
    check_config(net, heights);
    CascadeTrace trace;
    trace.topple_counts.assign(net.size(), 0);
    if (net.hub()) trace.hub_peak = heights[*net.hub() - 1];

    NodeId from = 1;
    while (true) {
        const NodeId v = lowest_unstable(net, heights, from, false);
        if (v == 0) {
            if (from == 1) break;
            from = 1; // touched ids are clean; confirm the tail once
            continue;
        }
        if (trace.topplings >= opts.max_topplings)
            fail(ErrorCode::NonTermination, "toppling cap " + std::to_string(opts.max_topplings) +
                                                " exceeded; no dissipation path?");
        fire(net, heights, v, BoundaryPolicy::Open, trace);
        from = rescan_from(net, v);
    }
    return {std::move(heights), std::move(trace)};
}

std::pair<Configuration, CascadeTrace> stabilize_srh(const Network& net, Configuration heights,
                                                     const StabilizeOptions& opts) {
    check_config(net, heights);
    if (!net.hub()) fail(ErrorCode::NoHub, "redistribution needs a hub");
    const NodeId hub = *net.hub();

    CascadeTrace trace;
    trace.topple_counts.assign(net.size(), 0);
    trace.hub_peak = heights[hub - 1];

    bool hub_fired = false;
    NodeId from = 1;
    while (true) {
        // The hub fires the moment it is unstable, and only once; after
        // that it absorbs without emitting.
        if (!hub_fired && heights[hub - 1] >= net.threshold(hub)) {
            fire(net, heights, hub, BoundaryPolicy::RedistributeToHub, trace);
            hub_fired = true;
            from = rescan_from(net, hub);
            continue;
        }
        const NodeId v = lowest_unstable(net, heights, from, true);
        if (v == 0) {
            if (from == 1) break;
            from = 1;
            continue;
        }
        if (trace.topplings >= opts.max_topplings)
            fail(ErrorCode::NonTermination,
                 "toppling cap " + std::to_string(opts.max_topplings) + " exceeded");
        fire(net, heights, v, BoundaryPolicy::RedistributeToHub, trace);
        from = rescan_from(net, v);
    }
    return {std::move(heights), std::move(trace)};
}

Configuration replay_trace(const Network& net, Configuration start, const CascadeTrace& trace,
                           int upto) {
    check_config(net, start);
    const std::size_t limit =
        upto < 0 ? trace.events.size() : std::min<std::size_t>(upto, trace.events.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const ToppleEvent& e = trace.events[i];
        start[e.node - 1] -= e.removed;
        for (const auto& [u, amount] : e.deliveries) start[u - 1] += amount;
        if (e.to_hub > 0) start[*net.hub() - 1] += e.to_hub;
    }
    return start;
}

namespace detail {

void require_step_inputs(const std::shared_ptr<const Network>& net, const Configuration& ground,
                         const Perturbation& inflow) {
    if (!net) fail(ErrorCode::ValidationError, "null network");
    if (static_cast<int>(ground.size()) != net->size() ||
        static_cast<int>(inflow.size()) != net->size())
        fail(ErrorCode::LengthMismatch, "ground state or inflow vs network");
    if (!is_almost_stable(*net, ground)) {
        const auto bad = unstable_nodes(*net, ground);
        NodeId offender = bad.front();
        if (net->hub() && offender == *net->hub() && bad.size() > 1) offender = bad[1];
        fail(ErrorCode::ValidationError,
             "ground state not almost stable (node " + std::to_string(offender) + ")");
    }
}

StepReport assemble_step(std::shared_ptr<const Network> net, int step_index, Height margin,
                         Perturbation inflow, Configuration initial, Configuration stabilized,
                         Perturbation removal, CascadeTrace trace, std::vector<Move> moves,
                         Height held, Height hub_peak) {
    const Network& g = *net;
    StepReport r;
    r.step = step_index;
    r.net = std::move(net);
    r.final_state = dissipate(stabilized, removal);
    r.inflow = std::move(inflow);
    r.initial = std::move(initial);
    r.stabilized = std::move(stabilized);
    r.removal = std::move(removal);
    r.cascade = std::move(trace);
    r.moves = std::move(moves);
    r.held = held;

    const Height inflow_total = total(r.inflow);
    if (inflow_total > 0) {
        r.indicator_initial = indicator(r.inflow, r.initial);
        r.indicator_stabilized = indicator(r.inflow, r.stabilized);
    }
    r.critical = critical_points(g, r.final_state, margin);
    if (g.hub()) r.hub_load = r.final_state[*g.hub() - 1];
    r.hub_peak = hub_peak;

    r.ledger.before = total(r.initial) - inflow_total;
    r.ledger.inflow = inflow_total;
    r.ledger.dissipated = total(r.removal);
    r.ledger.lost = r.cascade.lost;
    r.ledger.after = total(r.final_state);
    return r;
}

} // namespace detail

namespace {

StepReport toppling_step(std::shared_ptr<const Network> net, const Configuration& ground,
                         const Perturbation& inflow, const RemovalProvider& removal,
                         const StepOptions& opts, BoundaryPolicy policy) {
    detail::require_step_inputs(net, ground, inflow);
    Configuration initial = add_inflow(ground, inflow);
    auto [stabilized, trace] = policy == BoundaryPolicy::RedistributeToHub
                                   ? stabilize_srh(*net, initial, opts.stabilize)
                                   : stabilize_open(*net, initial, opts.stabilize);
    Perturbation zeta =
        removal ? removal(stabilized) : Perturbation(static_cast<std::size_t>(net->size()), 0);
    const Height peak = trace.hub_peak;
    return detail::assemble_step(std::move(net), opts.step_index, opts.critical_margin,
                                 inflow, std::move(initial), std::move(stabilized),
                                 std::move(zeta), std::move(trace), {}, 0, peak);
}

RemovalProvider fixed_removal(const std::optional<Perturbation>& removal) {
    if (!removal) return {};
    return [zeta = *removal](const Configuration&) { return zeta; };
}

} // namespace

StepReport srh_step(std::shared_ptr<const Network> net, const Configuration& ground,
                    const Perturbation& inflow, const RemovalProvider& removal,
                    const StepOptions& opts) {
    return toppling_step(std::move(net), ground, inflow, removal, opts,
                         BoundaryPolicy::RedistributeToHub);
}

StepReport open_step(std::shared_ptr<const Network> net, const Configuration& ground,
                     const Perturbation& inflow, const RemovalProvider& removal,
                     const StepOptions& opts) {
    return toppling_step(std::move(net), ground, inflow, removal, opts, BoundaryPolicy::Open);
}

StepReport srh_step(std::shared_ptr<const Network> net, const Configuration& ground,
                    const Perturbation& inflow, const std::optional<Perturbation>& removal,
                    const StepOptions& opts) {
    return srh_step(std::move(net), ground, inflow, fixed_removal(removal), opts);
}

StepReport open_step(std::shared_ptr<const Network> net, const Configuration& ground,
                     const Perturbation& inflow, const std::optional<Perturbation>& removal,
                     const StepOptions& opts) {
    return open_step(std::move(net), ground, inflow, fixed_removal(removal), opts);
}

} // namespace sandnet
