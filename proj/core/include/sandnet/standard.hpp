#pragma once

#include "sandnet/cascade.hpp"
#include "sandnet/rng.hpp"

#include <memory>
#include <optional>

namespace sandnet {

/// Resolves ties between equally crowded destinations.
struct TieBreak {
    bool random = false;
    std::uint64_t seed = 0;

    static TieBreak lowest_id() { return {}; }
    static TieBreak seeded(std::uint64_t seed) { return {true, seed}; }
};

struct RedistributionOutcome {
    Configuration heights;
    std::vector<Move> moves;
    Height held = 0; // excess a hub could not place anywhere (source == hub only)
};

/// Moves the excess of an overflowing node one particle at a time to the
/// currently least crowded neighbor (occupancy fraction; ties per
/// tiebreak), leaving the source at threshold-1. When every neighbor is at
/// threshold-1 or above the particle is rerouted to the hub. `rng` feeds
/// random tiebreaks; pass nullptr to seed one locally from the tiebreak.
RedistributionOutcome redistribute_node(const Network& net, const Configuration& heights, NodeId v,
                                        TieBreak tiebreak, Rng* rng = nullptr);

/// One standard-management iteration: inflow, then repeated per-node
/// redistribution (hub first whenever unstable, else lowest unstable id)
/// until stable, then optional dissipation. Mass is conserved exactly.
StepReport standard_step(std::shared_ptr<const Network> net, const Configuration& ground,
                         const Perturbation& inflow, TieBreak tiebreak,
                         const std::optional<Perturbation>& removal = {},
                         const StepOptions& opts = {}, Rng* rng = nullptr);

StepReport standard_step(std::shared_ptr<const Network> net, const Configuration& ground,
                         const Perturbation& inflow, TieBreak tiebreak,
                         const RemovalProvider& removal, const StepOptions& opts,
                         Rng* rng = nullptr);

} // namespace sandnet
