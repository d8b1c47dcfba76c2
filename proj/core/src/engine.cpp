#include "sandnet/engine.hpp"

#include "sandnet/rng.hpp"

#include <algorithm>
#include <numeric>

namespace sandnet {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Srh: return "srh";
        case Strategy::Standard: return "standard";
        case Strategy::AsmOpen: return "asm_open";
    }
    return "unknown";
}

Perturbation inflow_at(const InflowSchedule& schedule, const Network& net, int step) {
    if (const auto* explicit_list = std::get_if<std::vector<Perturbation>>(&schedule)) {
        if (step < 0 || step >= static_cast<int>(explicit_list->size()))
            fail(ErrorCode::ScheduleExhausted,
                 "inflow schedule has " + std::to_string(explicit_list->size()) +
                     " entries, step " + std::to_string(step) + " requested");
        return (*explicit_list)[step];
    }
    const auto& gen = std::get<InflowGenerator>(schedule);
    Perturbation w(static_cast<std::size_t>(net.size()), 0);
    Rng rng(mix_seed(gen.seed, static_cast<std::uint64_t>(step)));
    for (Height k = 0; k < gen.per_step; ++k) {
        NodeId site = 0;
        switch (gen.sites) {
            case InflowGenerator::Sites::Hub:
                if (!net.hub()) fail(ErrorCode::NoHub, "hub-targeted inflow needs a hub");
                site = *net.hub();
                break;
            case InflowGenerator::Sites::Uniform:
                site = static_cast<NodeId>(1 + rng.below(static_cast<std::uint64_t>(net.size())));
                break;
            case InflowGenerator::Sites::Weighted: {
                if (static_cast<int>(gen.weights.size()) != net.size())
                    fail(ErrorCode::LengthMismatch, "site weights vs network");
                Height sum = std::accumulate(gen.weights.begin(), gen.weights.end(), Height{0});
                if (sum <= 0) fail(ErrorCode::ValidationError, "site weights sum to zero");
                Height r = static_cast<Height>(rng.below(static_cast<std::uint64_t>(sum)));
                for (NodeId v = 1; v <= net.size(); ++v) {
                    r -= gen.weights[v - 1];
                    if (r < 0) {
                        site = v;
                        break;
                    }
                }
                break;
            }
        }
        w[site - 1] += 1;
    }
    return w;
}

Perturbation generate_dissipation(const DissipationPolicy& policy, const Configuration& stabilized,
                                  int step, std::uint64_t seed) {
    const std::size_t p = stabilized.size();
    if (std::holds_alternative<DissipationNone>(policy)) return Perturbation(p, 0);

    if (const auto* explicit_list = std::get_if<DissipationExplicit>(&policy)) {
        if (step < 0 || step >= static_cast<int>(explicit_list->per_step.size()))
            fail(ErrorCode::ScheduleExhausted,
                 "dissipation schedule has " + std::to_string(explicit_list->per_step.size()) +
                     " entries, step " + std::to_string(step) + " requested");
        const Perturbation& zeta = explicit_list->per_step[step];
        if (zeta.size() != p) fail(ErrorCode::LengthMismatch, "dissipation vs configuration");
        for (std::size_t i = 0; i < p; ++i)
            if (zeta[i] < 0 || zeta[i] > stabilized[i])
                fail(ErrorCode::Oversubtraction,
                     "node " + std::to_string(i + 1) + ": removal " + std::to_string(zeta[i]) +
                         " vs height " + std::to_string(stabilized[i]));
        return zeta;
    }

    const auto& random = std::get<DissipationRandom>(policy);
    if (random.budgets.empty()) fail(ErrorCode::ValidationError, "empty dissipation budget list");
    const Height budget = step < static_cast<int>(random.budgets.size())
                              ? random.budgets[step]
                              : random.budgets.back();
    if (budget < 0) fail(ErrorCode::ValidationError, "negative dissipation budget");
    const Height available = total(stabilized);
    if (budget > available)
        fail(ErrorCode::BudgetInfeasible, "budget " + std::to_string(budget) + " exceeds total " +
                                              std::to_string(available));

    Perturbation zeta(p, 0);
    Configuration remaining = stabilized;
    std::vector<NodeId> occupied;
    occupied.reserve(p);
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
    for (Height k = 0; k < budget; ++k) {
        occupied.clear();
        for (std::size_t i = 0; i < p; ++i)
            if (remaining[i] > 0) occupied.push_back(static_cast<NodeId>(i + 1));
        const NodeId pick = occupied[rng.below(occupied.size())];
        zeta[pick - 1] += 1;
        remaining[pick - 1] -= 1;
    }
    return zeta;
}

CollapseStatus detect_collapse(const Network& net, const Configuration& heights,
                               Height running_inflow, Height running_removal,
                               bool dissipation_active) {
    CollapseStatus status;
    if (net.hub()) status.hub_saturated = heights[*net.hub() - 1] >= net.threshold(*net.hub());
    status.system_saturated = total(heights) > net.capacity_sum();
    status.imbalance_warning = dissipation_active && running_inflow > running_removal;
    return status;
}

RunReport run_scenario(const ScenarioSpec& spec) {
    if (!spec.net) fail(ErrorCode::ValidationError, "scenario has no network");
    const Network& net = *spec.net;
    if (static_cast<int>(spec.ground_state.size()) != net.size())
        fail(ErrorCode::LengthMismatch, "ground state vs network");
    if (spec.steps < 0) fail(ErrorCode::ValidationError, "negative step count");
    if (!is_almost_stable(net, spec.ground_state))
        fail(ErrorCode::ValidationError, "ground state not almost stable");
    if ((spec.strategy == Strategy::Srh || spec.strategy == Strategy::Standard) && !net.hub())
        fail(ErrorCode::NoHub, std::string(to_string(spec.strategy)) + " strategy needs a hub");
    if (const auto* explicit_inflow = std::get_if<std::vector<Perturbation>>(&spec.inflow))
        if (static_cast<int>(explicit_inflow->size()) != spec.steps)
            fail(ErrorCode::ValidationError, "explicit inflow schedule length != steps");
    if (const auto* explicit_zeta = std::get_if<DissipationExplicit>(&spec.dissipation))
        if (static_cast<int>(explicit_zeta->per_step.size()) != spec.steps)
            fail(ErrorCode::ValidationError, "explicit dissipation schedule length != steps");

    const bool dissipation_active = !std::holds_alternative<DissipationNone>(spec.dissipation);
    std::uint64_t dissipation_seed = 0;
    if (const auto* random = std::get_if<DissipationRandom>(&spec.dissipation))
        dissipation_seed = random->seed;

    RunReport run;
    run.scenario = spec.name;
    run.strategy = spec.strategy;
    run.steps.reserve(static_cast<std::size_t>(spec.steps));

    Rng tiebreak_rng(spec.tiebreak.seed);
    Configuration state = spec.ground_state;
    Height running_inflow = 0, running_removal = 0;

    for (int n = 0; n < spec.steps; ++n) {
        const Perturbation w = inflow_at(spec.inflow, net, n);
        StepOptions opts;
        opts.stabilize.max_topplings = spec.caps.max_topplings;
        opts.max_moves = spec.caps.max_moves;
        opts.critical_margin = spec.critical_margin;
        opts.step_index = n;
        RemovalProvider provider;
        if (dissipation_active)
            provider = [&spec, n, dissipation_seed](const Configuration& stabilized) {
                return generate_dissipation(spec.dissipation, stabilized, n, dissipation_seed);
            };

        StepReport report;
        try {
            switch (spec.strategy) {
                case Strategy::Srh:
                    report = srh_step(spec.net, state, w, provider, opts);
                    break;
                case Strategy::Standard:
                    report = standard_step(spec.net, state, w, spec.tiebreak, provider, opts,
                                           &tiebreak_rng);
                    break;
                case Strategy::AsmOpen:
                    report = open_step(spec.net, state, w, provider, opts);
                    break;
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NonTermination && spec.strategy != Strategy::Srh &&
                total(add_inflow(state, w)) > net.capacity_sum())
                fail(ErrorCode::NonTermination,
                     std::string(e.what()) +
                         " (system saturated: total load exceeds the capacity sum " +
                         std::to_string(net.capacity_sum()) + ")");
            throw;
        }

        running_inflow += report.ledger.inflow;
        running_removal += report.ledger.dissipated;
        run.lost_total += report.ledger.lost;

        const CollapseStatus status =
            detect_collapse(net, report.final_state, running_inflow, running_removal,
                            dissipation_active);
        if (status.hub_saturated)
            run.collapse_events.push_back({n, "HubSaturated", false});
        else if (net.hub() && report.hub_peak >= net.threshold(*net.hub()))
            run.collapse_events.push_back({n, "HubSaturated", true});
        if (status.system_saturated) run.collapse_events.push_back({n, "SystemSaturated", false});
        if (status.imbalance_warning)
            run.collapse_events.push_back({n, "ImbalanceWarning", false});

        state = report.final_state;
        run.steps.push_back(std::move(report));
    }

    run.inflow_total = running_inflow;
    run.dissipated_total = running_removal;
    run.balance_holds = running_inflow == running_removal;
    run.final_state = std::move(state);
    return run;
}

} // namespace sandnet
