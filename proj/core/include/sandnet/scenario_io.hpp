#pragma once

#include "sandnet/engine.hpp"
#include "sandnet/report.hpp"

#include <string>

namespace sandnet {

/// Parses a scenario document (JSON object syntax; see README for the
/// schema) and validates it: network invariants, almost-stable ground
/// state, schedule lengths, hub presence for hub-based strategies.
/// Throws Error with SyntaxError or a validation code.
ScenarioSpec parse_scenario(const std::string& text);

/// Canonical textual form; parse(serialize(spec)) is semantically identical.
std::string serialize_scenario(const ScenarioSpec& spec);

/// Deterministic JSON renderings (sorted keys, no locale dependence), so
/// identical runs produce byte-identical bytes.
std::string step_report_json(const StepReport& report);
std::string run_report_json(const RunReport& report);
std::string comparison_json(const ComparisonReport& report, const std::string& scenario);

/// CSV rows, one per step: scenario,strategy,step,F_num,F_den,F_decimal,
/// critical_count,hub_load,total_mass (header included).
std::string run_report_csv(const RunReport& report);

/// CSV with the fixed comparison columns: scenario,strategy,F_num,F_den,
/// F_decimal,critical_count,hub_load,total_mass.
std::string comparison_csv(const ComparisonReport& report, const std::string& scenario);

/// Writes via a sibling temp file and rename, so readers never observe a
/// half-written report.
void write_file_atomic(const std::string& path, const std::string& bytes);

} // namespace sandnet
