#include "sandnet/report.hpp"

namespace sandnet {

namespace {

ComparisonReport::Side side_of(const StepReport& r, const std::string& label) {
    ComparisonReport::Side s;
    s.label = label;
    s.indicator = r.indicator_stabilized;
    s.critical_count = r.critical.count();
    s.hub_load = r.hub_load;
    s.total_mass = total(r.final_state);
    return s;
}

} // namespace

ComparisonReport compare(const StepReport& a, const StepReport& b, const std::string& label_a,
                         const std::string& label_b) {
    if (!a.net || !b.net) fail(ErrorCode::MismatchedScenario, "report without a network");
    if (!(*a.net == *b.net)) fail(ErrorCode::MismatchedScenario, "different networks");
    if (a.inflow != b.inflow) fail(ErrorCode::MismatchedScenario, "different inflow");

    ComparisonReport out;
    out.a = side_of(a, label_a);
    out.b = side_of(b, label_b);
    if (out.a.indicator && out.b.indicator) {
        out.indicator_delta = subtract(*out.b.indicator, *out.a.indicator);
        if (*out.a.indicator < *out.b.indicator)
            out.preferred = 0;
        else if (*out.b.indicator < *out.a.indicator)
            out.preferred = 1;
    }
    out.critical_delta = static_cast<long long>(out.b.critical_count) -
                         static_cast<long long>(out.a.critical_count);
    if (out.a.hub_load && out.b.hub_load) out.hub_delta = *out.b.hub_load - *out.a.hub_load;
    out.mass_delta = out.b.total_mass - out.a.total_mass;
    return out;
}

} // namespace sandnet
