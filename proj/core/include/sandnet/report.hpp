#pragma once

#include "sandnet/metrics.hpp"
#include "sandnet/trace.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sandnet {

struct MassLedger {
    Height before = 0;     // ground-state total
    Height inflow = 0;     // arrivals this step
    Height dissipated = 0; // removals this step
    Height lost = 0;       // open-boundary losses
    Height after = 0;      // final total

    bool balanced() const { return after == before + inflow - dissipated - lost; }
};

/// Everything one workflow iteration produced. `initial` is the ground
/// state plus inflow, `stabilized` the post-toppling (or post-move) state,
/// `final_state` the same after dissipation.
struct StepReport {
    int step = 0;
    std::shared_ptr<const Network> net;
    Perturbation inflow;
    Configuration initial;
    Configuration stabilized;
    Perturbation removal;
    Configuration final_state;

    CascadeTrace cascade;    // toppling strategies
    std::vector<Move> moves; // standard strategy
    Height held = 0;         // standard: excess that could not leave its node

    std::optional<IndicatorValue> indicator_initial;    // F(w, initial)
    std::optional<IndicatorValue> indicator_stabilized; // F(w, stabilized)
    CriticalReport critical;                            // on final_state

    std::optional<Height> hub_load;  // final height at the hub
    Height hub_peak = 0;             // max transient hub height in the step
    MassLedger ledger;
};

/// Side-by-side strategy table for one scenario: indicator, critical
/// count, hub load and mass per side, with exact deltas (b minus a).
struct ComparisonReport {
    struct Side {
        std::string label;
        std::optional<IndicatorValue> indicator;
        std::size_t critical_count = 0;
        std::optional<Height> hub_load;
        Height total_mass = 0;
    };

    Side a;
    Side b;
    std::optional<Rational> indicator_delta;
    long long critical_delta = 0;
    std::optional<Height> hub_delta;
    Height mass_delta = 0;
    /// 0 = a, 1 = b; empty on a tie or when an indicator is missing.
    /// Smaller indicator wins.
    std::optional<int> preferred;
};

ComparisonReport compare(const StepReport& a, const StepReport& b,
                         const std::string& label_a = "a", const std::string& label_b = "b");

} // namespace sandnet
