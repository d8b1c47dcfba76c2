#pragma once

#include "sandnet/heights.hpp"
#include "sandnet/report.hpp"
#include "sandnet/trace.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <utility>

namespace sandnet {

/// What happens to particles toppled through external slots: Open loses
/// them, RedistributeToHub credits them to the hub.
enum class BoundaryPolicy : std::uint8_t { Open, RedistributeToHub };

struct ToppleOutcome {
    Configuration heights;
    Height to_hub = 0;
    Height lost = 0;
};

/// Fires one unstable node: removes threshold(v) particles, +1 to each
/// in-network neighbor, external slots per the policy.
ToppleOutcome topple_once(const Network& net, const Configuration& heights, NodeId v,
                          BoundaryPolicy policy);

struct StabilizeOptions {
    Height max_topplings = 1'000'000;
};

/// Open-boundary stabilization: repeatedly fires the lowest-id unstable
/// node until every node is stable. The result is order-independent; the
/// fixed schedule only pins the trace.
std::pair<Configuration, CascadeTrace> stabilize_open(const Network& net, Configuration heights,
                                                      const StabilizeOptions& opts = {});

/// Hub-redistribution stabilization: boundary overflow is credited to the
/// hub, the hub fires at most once (immediately when unstable, whether at
/// the start or mid-cascade) and afterwards only absorbs; other nodes fire
/// lowest-id first until the configuration is almost stable.
std::pair<Configuration, CascadeTrace> stabilize_srh(const Network& net, Configuration heights,
                                                     const StabilizeOptions& opts = {});

struct StepOptions {
    StabilizeOptions stabilize;
    Height max_moves = 1'000'000; // standard strategy only
    Height critical_margin = 2;
    int step_index = 0;
};

/// Computes per-step removals once the stabilized configuration is known;
/// must return a vector admissible against its argument.
using RemovalProvider = std::function<Perturbation(const Configuration& stabilized)>;

/// One hub-redistribution workflow iteration: inflow, stabilize_srh,
/// optional dissipation, metrics and ledger. Requires an almost-stable
/// ground state.
StepReport srh_step(std::shared_ptr<const Network> net, const Configuration& ground,
                    const Perturbation& inflow, const std::optional<Perturbation>& removal = {},
                    const StepOptions& opts = {});

/// Same workflow with open boundaries (plain sandpile reference model).
StepReport open_step(std::shared_ptr<const Network> net, const Configuration& ground,
                     const Perturbation& inflow, const std::optional<Perturbation>& removal = {},
                     const StepOptions& opts = {});

/// Provider-based variants used by the scenario engine, where random
/// dissipation depends on the stabilized heights.
StepReport srh_step(std::shared_ptr<const Network> net, const Configuration& ground,
                    const Perturbation& inflow, const RemovalProvider& removal,
                    const StepOptions& opts);
StepReport open_step(std::shared_ptr<const Network> net, const Configuration& ground,
                     const Perturbation& inflow, const RemovalProvider& removal,
                     const StepOptions& opts);

} // namespace sandnet
