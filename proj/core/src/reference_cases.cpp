#include "sandnet/reference_cases.hpp"

#include "sandnet/cascade.hpp"
#include "sandnet/engine.hpp"
#include "sandnet/metrics.hpp"
#include "sandnet/standard.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace sandnet {

namespace {

Perturbation sparse(std::size_t p, std::initializer_list<std::pair<NodeId, Height>> entries) {
    Perturbation w(p, 0);
    for (const auto& [node, amount] : entries) w[node - 1] += amount;
    return w;
}

std::vector<GalleryCase> build_gallery() {
    std::vector<GalleryCase> cases;

    { // 3x3 von Neumann, single burst at the center, open boundaries.
        GalleryCase c;
        c.name = "vn3_center_burst";
        c.grid = {3, Neighborhood::VonNeumann};
        c.ground = Configuration(9, 0);
        c.inflow = sparse(9, {{5, 4}});
        c.initial = {0, 0, 0, 0, 4, 0, 0, 0, 0};
        c.open_result = Configuration{0, 1, 0, 1, 0, 1, 0, 1, 0};
        cases.push_back(std::move(c));
    }

    { // 3x3 von Neumann, one hub arrival per step under both workflows.
        GalleryCase c;
        c.name = "vn3_hub_drip";
        c.grid = {3, Neighborhood::VonNeumann};
        c.ground = {2, 1, 3, 1, 3, 1, 1, 0, 2};
        c.inflow = sparse(9, {{5, 1}});
        c.initial = {2, 1, 3, 1, 4, 1, 1, 0, 2};
        c.srh_result = Configuration{2, 2, 3, 2, 0, 2, 1, 1, 2};
        c.standard_admissible = Configuration{2, 1, 3, 1, 3, 1, 1, 1, 2};
        cases.push_back(std::move(c));
    }

    { // 3x3 Moore, hub surge to 11.
        GalleryCase c;
        c.name = "moore3_hub_surge";
        c.grid = {3, Neighborhood::Moore};
        c.ground = {2, 3, 1, 5, 7, 2, 4, 3, 3};
        c.inflow = sparse(9, {{5, 4}});
        c.initial = {2, 3, 1, 5, 11, 2, 4, 3, 3};
        c.srh_result = Configuration{3, 4, 2, 6, 3, 3, 5, 4, 4};
        c.standard_admissible = Configuration{2, 4, 1, 5, 7, 4, 4, 4, 3};
        c.f_initial = Rational{11, 1};
        c.f_standard = Rational{7, 1};
        c.f_srh = Rational{3, 1};
        cases.push_back(std::move(c));
    }

    { // 5x5 Moore, arrivals spread over the hub and its surroundings.
        GalleryCase c;
        c.name = "moore5_multi_site";
        c.grid = {5, Neighborhood::Moore};
        c.ground = {1, 2, 4, 2, 5,
                    2, 4, 2, 3, 1,
                    3, 2, 7, 2, 3,
                    2, 1, 4, 2, 2,
                    4, 2, 1, 5, 4};
        c.inflow = sparse(25, {{9, 1}, {12, 1}, {13, 4}, {14, 2}, {18, 1}, {19, 1}});
        c.initial = {1, 2, 4, 2, 5,
                     2, 4, 2, 4, 1,
                     3, 3, 11, 4, 3,
                     2, 1, 5, 3, 2,
                     4, 2, 1, 5, 4};
        c.srh_result = Configuration{1, 2, 4, 2, 5,
                                     2, 5, 3, 5, 1,
                                     3, 4, 3, 5, 3,
                                     2, 2, 6, 4, 2,
                                     4, 2, 1, 5, 4};
        c.standard_admissible = Configuration{1, 2, 4, 2, 5,
                                              2, 4, 4, 4, 1,
                                              3, 3, 7, 4, 3,
                                              2, 3, 5, 3, 2,
                                              4, 2, 1, 5, 4};
        c.f_initial = Rational{67, 10};
        c.f_standard = Rational{51, 10};
        c.f_srh = Rational{41, 10};
        cases.push_back(std::move(c));
    }

    { // 5x5 Moore, hub toppling triggers a second toppling at (3,4).
        GalleryCase c;
        c.name = "moore5_double_topple";
        c.grid = {5, Neighborhood::Moore};
        c.ground = {4, 1, 0, 1, 3,
                    5, 0, 5, 1, 1,
                    1, 2, 7, 7, 4,
                    5, 5, 2, 4, 5,
                    3, 5, 4, 5, 3};
        c.inflow = sparse(25, {{13, 4}});
        c.initial = {4, 1, 0, 1, 3,
                     5, 0, 5, 1, 1,
                     1, 2, 11, 7, 4,
                     5, 5, 2, 4, 5,
                     3, 5, 4, 5, 3};
        c.srh_intermediate = Configuration{4, 1, 0, 1, 3,
                                           5, 1, 6, 2, 1,
                                           1, 3, 3, 8, 4,
                                           5, 6, 3, 5, 5,
                                           3, 5, 4, 5, 3};
        c.srh_result = Configuration{4, 1, 0, 1, 3,
                                     5, 1, 7, 3, 2,
                                     1, 3, 4, 0, 5,
                                     5, 6, 4, 6, 6,
                                     3, 5, 4, 5, 3};
        c.standard_admissible = Configuration{4, 1, 0, 1, 3,
                                              5, 3, 5, 2, 1,
                                              1, 2, 7, 7, 4,
                                              5, 5, 2, 4, 5,
                                              3, 5, 4, 5, 3};
        c.f_initial = Rational{11, 1};
        c.f_standard = Rational{7, 1};
        c.f_srh = Rational{4, 1};
        c.critical_standard = 2;
        c.critical_srh = 4;
        cases.push_back(std::move(c));
    }

    // Shared 9x9 Moore ground state for the two outbreak studies.
    const Configuration nine_ground = {
        1, 2, 1, 4, 6, 2, 3, 6, 2,
        3, 2, 5, 2, 1, 3, 2, 4, 3,
        3, 3, 1, 5, 6, 2, 3, 1, 3,
        6, 1, 5, 3, 2, 5, 2, 3, 4,
        1, 3, 2, 1, 6, 3, 4, 5, 6,
        1, 4, 1, 2, 2, 5, 1, 2, 3,
        4, 1, 3, 4, 5, 6, 2, 5, 3,
        4, 2, 3, 5, 2, 2, 6, 3, 1,
        1, 6, 5, 2, 4, 4, 2, 1, 2};

    { // 9x9 Moore, outbreak concentrated around the hub.
        GalleryCase c;
        c.name = "moore9_central_outbreak";
        c.grid = {9, Neighborhood::Moore};
        c.ground = nine_ground;
        c.inflow = sparse(81, {{32, 2}, {33, 1}, {41, 5}, {42, 2}});
        c.initial = {1, 2, 1, 4, 6, 2, 3, 6, 2,
                     3, 2, 5, 2, 1, 3, 2, 4, 3,
                     3, 3, 1, 5, 6, 2, 3, 1, 3,
                     6, 1, 5, 3, 4, 6, 2, 3, 4,
                     1, 3, 2, 1, 11, 5, 4, 5, 6,
                     1, 4, 1, 2, 2, 5, 1, 2, 3,
                     4, 1, 3, 4, 5, 6, 2, 5, 3,
                     4, 2, 3, 5, 2, 2, 6, 3, 1,
                     1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.srh_result = Configuration{1, 2, 1, 4, 6, 2, 3, 6, 2,
                                     3, 2, 5, 2, 1, 3, 2, 4, 3,
                                     3, 3, 1, 5, 6, 2, 3, 1, 3,
                                     6, 1, 5, 4, 5, 7, 2, 3, 4,
                                     1, 3, 2, 2, 3, 6, 4, 5, 6,
                                     1, 4, 1, 3, 3, 6, 1, 2, 3,
                                     4, 1, 3, 4, 5, 6, 2, 5, 3,
                                     4, 2, 3, 5, 2, 2, 6, 3, 1,
                                     1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.standard_admissible = Configuration{1, 2, 1, 4, 6, 2, 3, 6, 2,
                                              3, 2, 5, 2, 1, 3, 2, 4, 3,
                                              3, 3, 1, 5, 6, 2, 3, 1, 3,
                                              6, 1, 5, 3, 4, 6, 2, 3, 4,
                                              1, 3, 2, 3, 7, 5, 4, 5, 6,
                                              1, 4, 1, 3, 3, 5, 1, 2, 3,
                                              4, 1, 3, 4, 5, 6, 2, 5, 3,
                                              4, 2, 3, 5, 2, 2, 6, 3, 1,
                                              1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.f_initial = Rational{79, 10};
        c.f_standard = Rational{59, 10};
        c.f_srh = Rational{44, 10};
        c.note = "a legacy figure of 4.5 circulates for this indicator; recomputing from the "
                 "final heights gives 44/10 = 4.4 (difference 0.1), which is what is asserted";
        cases.push_back(std::move(c));
    }

    { // 9x9 Moore, outbreak at the top-right edge; overflow reroutes to the hub.
        GalleryCase c;
        c.name = "moore9_peripheral_outbreak";
        c.grid = {9, Neighborhood::Moore};
        c.ground = nine_ground;
        c.inflow = sparse(81, {{8, 5}, {9, 2}, {17, 2}, {18, 1}});
        c.initial = {1, 2, 1, 4, 6, 2, 3, 11, 4,
                     3, 2, 5, 2, 1, 3, 2, 6, 4,
                     3, 3, 1, 5, 6, 2, 3, 1, 3,
                     6, 1, 5, 3, 2, 5, 2, 3, 4,
                     1, 3, 2, 1, 6, 3, 4, 5, 6,
                     1, 4, 1, 2, 2, 5, 1, 2, 3,
                     4, 1, 3, 4, 5, 6, 2, 5, 3,
                     4, 2, 3, 5, 2, 2, 6, 3, 1,
                     1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.srh_intermediate = Configuration{1, 2, 1, 4, 6, 2, 4, 3, 5,
                                           3, 2, 5, 2, 1, 3, 3, 7, 5,
                                           3, 3, 1, 5, 6, 2, 3, 1, 3,
                                           6, 1, 5, 3, 2, 5, 2, 3, 4,
                                           1, 3, 2, 1, 9, 3, 4, 5, 6,
                                           1, 4, 1, 2, 2, 5, 1, 2, 3,
                                           4, 1, 3, 4, 5, 6, 2, 5, 3,
                                           4, 2, 3, 5, 2, 2, 6, 3, 1,
                                           1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.srh_result = Configuration{1, 2, 1, 4, 6, 2, 4, 3, 5,
                                     3, 2, 5, 2, 1, 3, 3, 7, 5,
                                     3, 3, 1, 5, 6, 2, 3, 1, 3,
                                     6, 1, 5, 4, 3, 6, 2, 3, 4,
                                     1, 3, 2, 2, 1, 4, 4, 5, 6,
                                     1, 4, 1, 3, 3, 6, 1, 2, 3,
                                     4, 1, 3, 4, 5, 6, 2, 5, 3,
                                     4, 2, 3, 5, 2, 2, 6, 3, 1,
                                     1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.standard_admissible = Configuration{1, 2, 1, 4, 6, 2, 5, 7, 4,
                                              3, 2, 5, 2, 1, 3, 4, 6, 4,
                                              3, 3, 1, 5, 6, 2, 3, 1, 3,
                                              6, 1, 5, 3, 2, 5, 2, 3, 4,
                                              1, 3, 2, 1, 6, 3, 4, 5, 6,
                                              1, 4, 1, 2, 2, 5, 1, 2, 3,
                                              4, 1, 3, 4, 5, 6, 2, 5, 3,
                                              4, 2, 3, 5, 2, 2, 6, 3, 1,
                                              1, 6, 5, 2, 4, 4, 2, 1, 2};
        c.f_initial = Rational{79, 10};
        c.f_standard = Rational{59, 10};
        c.f_srh = Rational{44, 10};
        cases.push_back(std::move(c));
    }

    return cases;
}

std::string shape_diff(const Configuration& expected, const Configuration& actual) {
    if (expected.size() != actual.size())
        return "length " + std::to_string(actual.size()) + " vs " + std::to_string(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (expected[i] != actual[i])
            return "node " + std::to_string(i + 1) + ": " + std::to_string(actual[i]) + " vs " +
                   std::to_string(expected[i]);
    return "";
}

struct Checker {
    VerifyReport report;

    void add(const std::string& check, bool pass, std::string detail = "") {
        report.rows.push_back({check, pass, std::move(detail)});
    }

    void matrix(const std::string& check, const Configuration& expected,
                const Configuration& actual) {
        const std::string diff = shape_diff(expected, actual);
        add(check, diff.empty(), diff);
    }

    void rational(const std::string& check, const Rational& expected, const Rational& actual,
                  const std::string& note) {
        const bool pass = expected == actual;
        std::string detail = actual.decimal();
        if (!pass) detail += " vs expected " + expected.decimal();
        if (!note.empty()) detail += " [" + note + "]";
        add(check, pass, detail);
    }
};

// The published standard-management results are "admissible" outcomes:
// exactly the excess left the one overflowing node, every receiving node
// is one of its neighbors (or the hub, under the edge-reassignment law),
// and nothing was created or destroyed.
std::string admissibility_diff(const Network& net, const Configuration& initial,
                               const Configuration& result) {
    if (initial.size() != result.size()) return "length mismatch";
    const auto overflowing = unstable_nodes(net, initial);
    if (overflowing.size() != 1) return "expected exactly one overflowing node";
    const NodeId v = overflowing.front();

    if (total(result) != total(initial)) return "mass not conserved";
    if (result[v - 1] != net.threshold(v) - 1)
        return "source holds " + std::to_string(result[v - 1]) + ", expected threshold-1";
    if (!is_stable(net, result)) return "result not stable";

    const auto& nbrs = net.neighbors(v);
    Height moved = 0;
    for (NodeId u = 1; u <= net.size(); ++u) {
        if (u == v) continue;
        const Height delta = result[u - 1] - initial[u - 1];
        if (delta < 0) return "node " + std::to_string(u) + " lost particles";
        if (delta == 0) continue;
        const bool neighbor = std::binary_search(nbrs.begin(), nbrs.end(), u);
        const bool hub = net.hub() && *net.hub() == u;
        if (!neighbor && !hub) return "node " + std::to_string(u) + " is not a legal destination";
        moved += delta;
    }
    const Height excess = initial[v - 1] - (net.threshold(v) - 1);
    if (moved != excess)
        return "moved " + std::to_string(moved) + ", expected " + std::to_string(excess);
    return "";
}

void verify_one(Checker& out, const GalleryCase& c) {
    const auto net = std::make_shared<const Network>(Network::grid(c.grid));

    out.matrix(c.name + ": initial state", c.initial, add_inflow(c.ground, c.inflow));

    if (c.open_result) {
        auto [settled, trace] = stabilize_open(*net, c.initial);
        out.matrix(c.name + ": open result", *c.open_result, settled);
        out.add(c.name + ": open result stable", is_stable(*net, settled));
    }

    if (c.srh_result) {
        auto [settled, trace] = stabilize_srh(*net, c.initial);
        out.matrix(c.name + ": srh result", *c.srh_result, settled);
        out.add(c.name + ": srh almost stable", is_almost_stable(*net, settled));
        out.add(c.name + ": srh mass conserved", total(settled) == total(c.initial) &&
                                                     trace.lost == 0);
        if (c.srh_intermediate)
            out.matrix(c.name + ": srh intermediate", *c.srh_intermediate,
                       replay_trace(*net, c.initial, trace, 1));
    }

    if (c.standard_admissible) {
        const std::string diff = admissibility_diff(*net, c.initial, *c.standard_admissible);
        out.add(c.name + ": standard result admissible", diff.empty(), diff);
    }

    if (c.f_initial)
        out.rational(c.name + ": indicator(initial)", *c.f_initial, indicator(c.inflow, c.initial),
                     "");
    if (c.f_standard && c.standard_admissible)
        out.rational(c.name + ": indicator(standard)", *c.f_standard,
                     indicator(c.inflow, *c.standard_admissible), "");
    if (c.f_srh && c.srh_result)
        out.rational(c.name + ": indicator(srh)", *c.f_srh, indicator(c.inflow, *c.srh_result),
                     c.note);

    if (c.critical_standard && c.standard_admissible) {
        const auto crit = critical_points(*net, *c.standard_admissible, 2);
        out.add(c.name + ": critical count (standard)", crit.count() == *c.critical_standard,
                std::to_string(crit.count()) + " vs " + std::to_string(*c.critical_standard));
    }
    if (c.critical_srh && c.srh_result) {
        const auto crit = critical_points(*net, *c.srh_result, 2);
        out.add(c.name + ": critical count (srh)", crit.count() == *c.critical_srh,
                std::to_string(crit.count()) + " vs " + std::to_string(*c.critical_srh));
    }
}

void verify_drip(Checker& out) {
    const GalleryCase* drip = nullptr;
    for (const GalleryCase& c : reference_gallery())
        if (c.name == "vn3_hub_drip") drip = &c;
    if (!drip) {
        out.add("vn3_hub_drip: fixtures present", false);
        return;
    }
    const DripContinuation& cont = drip_continuation();
    const auto net = std::make_shared<const Network>(Network::grid(drip->grid));

    // One standard step from the original ground state.
    const StepReport first = standard_step(net, drip->ground, drip->inflow, TieBreak::lowest_id());
    out.matrix("vn3_hub_drip: first standard step", cont.reinit_ground, first.final_state);

    // Three further drip steps from the reinitialized ground state.
    ScenarioSpec spec;
    spec.name = "vn3_hub_drip";
    spec.net = net;
    spec.ground_state = cont.reinit_ground;
    spec.strategy = Strategy::Standard;
    spec.steps = cont.steps;
    spec.inflow = InflowGenerator{InflowGenerator::Sites::Hub, {}, 1, 0};
    const RunReport run = run_scenario(spec);
    out.matrix("vn3_hub_drip: three-step standard run", cont.final_state, run.final_state);

    // The srh branch from the original start, then count how many hub
    // arrivals fit before the next toppling.
    StepReport srh = srh_step(net, drip->ground, drip->inflow);
    out.matrix("vn3_hub_drip: srh result", *drip->srh_result, srh.final_state);
    int absorbed = 0;
    Configuration state = srh.final_state;
    for (int k = 0; k < cont.srh_headroom + 1; ++k) {
        const StepReport next = srh_step(net, state, drip->inflow);
        if (next.cascade.topplings > 0) break;
        state = next.final_state;
        ++absorbed;
    }
    out.add("vn3_hub_drip: srh absorbs " + std::to_string(cont.srh_headroom) + " more arrivals",
            absorbed == cont.srh_headroom,
            "absorbed " + std::to_string(absorbed));
}

} // namespace

const std::vector<GalleryCase>& reference_gallery() {
    static const std::vector<GalleryCase> gallery = build_gallery();
    return gallery;
}

const DripContinuation& drip_continuation() {
    static const DripContinuation cont{
        {2, 1, 3, 1, 3, 1, 1, 1, 2}, 3, {2, 2, 3, 2, 3, 2, 1, 1, 2}, 3};
    return cont;
}

bool VerifyReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

std::string VerifyReport::table() const {
    std::size_t width = 0;
    for (const VerifyRow& r : rows) width = std::max(width, r.check.size());
    std::ostringstream out;
    for (const VerifyRow& r : rows) {
        out << (r.pass ? "PASS  " : "FAIL  ") << r.check
            << std::string(width - r.check.size() + 2, ' ') << r.detail << "\n";
    }
    out << (all_pass() ? "all checks passed" : "CHECKS FAILED") << " (" << rows.size() << " rows)"
        << "\n";
    return out.str();
}

VerifyReport verify_cases(const std::vector<GalleryCase>& cases) {
    Checker checker;
    for (const GalleryCase& c : cases) verify_one(checker, c);
    return std::move(checker.report);
}

VerifyReport verify_reference_cases() {
    Checker checker;
    for (const GalleryCase& c : reference_gallery()) verify_one(checker, c);
    verify_drip(checker);
    return std::move(checker.report);
}

} // namespace sandnet
