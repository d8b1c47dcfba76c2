#pragma once

#include "sandnet/report.hpp"

#include <memory>

namespace sandnet::detail {

/// Dissipation, metrics and the mass ledger, shared by every step flavor.
StepReport assemble_step(std::shared_ptr<const Network> net, int step_index, Height margin,
                         Perturbation inflow, Configuration initial, Configuration stabilized,
                         Perturbation removal, CascadeTrace trace, std::vector<Move> moves,
                         Height held, Height hub_peak);

void require_step_inputs(const std::shared_ptr<const Network>& net, const Configuration& ground,
                         const Perturbation& inflow);

} // namespace sandnet::detail
