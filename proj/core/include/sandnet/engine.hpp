#pragma once

#include "sandnet/cascade.hpp"
#include "sandnet/standard.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sandnet {

enum class Strategy : std::uint8_t { Srh, Standard, AsmOpen };

const char* to_string(Strategy s);

/// Seeded per-step inflow: `per_step` particles, each dropped on a site
/// drawn from the site distribution.
struct InflowGenerator {
    enum class Sites : std::uint8_t { Hub, Uniform, Weighted };
    Sites sites = Sites::Hub;
    std::vector<Height> weights; // Weighted only, length p
    Height per_step = 1;
    std::uint64_t seed = 0;
};

using InflowSchedule = std::variant<std::vector<Perturbation>, InflowGenerator>;

struct DissipationNone {};
struct DissipationExplicit {
    std::vector<Perturbation> per_step;
};
/// Removes `budget` particles per step, each drawn uniformly over the
/// currently occupied nodes. budgets is broadcast when it has one entry.
struct DissipationRandom {
    std::uint64_t seed = 0;
    std::vector<Height> budgets{0};
};

using DissipationPolicy = std::variant<DissipationNone, DissipationExplicit, DissipationRandom>;

struct Caps {
    Height max_topplings = 1'000'000;
    Height max_moves = 1'000'000;
};

struct ScenarioSpec {
    std::string name = "scenario";
    std::shared_ptr<const Network> net;
    Configuration ground_state;
    Strategy strategy = Strategy::Srh;
    int steps = 1;
    InflowSchedule inflow = InflowGenerator{};
    DissipationPolicy dissipation = DissipationNone{};
    TieBreak tiebreak;
    Caps caps;
    Height critical_margin = 2;
    std::string output_format; // optional hint from the scenario file
    std::string output_path;
};

struct CollapseStatus {
    bool hub_saturated = false;    // hub at/above threshold in a settled state
    bool system_saturated = false; // total load exceeds sum of (threshold-1)
    bool imbalance_warning = false;// cumulative inflow exceeds cumulative removal
};

struct CollapseEvent {
    int step = 0;
    std::string kind;
    bool transient = false; // raised on a mid-step peak rather than the final state
};

struct RunReport {
    std::string scenario;
    Strategy strategy = Strategy::Srh;
    std::vector<StepReport> steps;
    Height inflow_total = 0;
    Height dissipated_total = 0;
    Height lost_total = 0;
    /// Inflow/outflow balance across the whole run; checked, never enforced.
    bool balance_holds = false;
    std::vector<CollapseEvent> collapse_events;
    Configuration final_state;
};

/// Flags saturation and imbalance; pure and side-effect free. The caller
/// says whether a dissipation policy is active.
CollapseStatus detect_collapse(const Network& net, const Configuration& heights,
                               Height running_inflow, Height running_removal,
                               bool dissipation_active);

/// Per-step removal vector under a dissipation policy. Random budgets are
/// drawn reproducibly from (seed, step); explicit schedules are indexed.
Perturbation generate_dissipation(const DissipationPolicy& policy, const Configuration& stabilized,
                                  int step, std::uint64_t seed);

/// Runs all steps, feeding each step's final state into the next.
/// Deterministic given the spec (all randomness is seeded).
RunReport run_scenario(const ScenarioSpec& spec);

/// The inflow vector a schedule yields at one step.
Perturbation inflow_at(const InflowSchedule& schedule, const Network& net, int step);

} // namespace sandnet
