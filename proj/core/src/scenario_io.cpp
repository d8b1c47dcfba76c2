#include "sandnet/scenario_io.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace sandnet {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    fail(ErrorCode::ValidationError, "field '" + field + "': " + why);
}

const json& require(const json& obj, const std::string& field) {
    auto it = obj.find(field);
    if (it == obj.end()) bad_field(field, "missing");
    return *it;
}

long long require_int(const json& value, const std::string& field, long long min) {
    if (!value.is_number_integer()) bad_field(field, "expected an integer");
    const long long v = value.get<long long>();
    if (v < min) bad_field(field, "must be >= " + std::to_string(min));
    return v;
}

std::uint64_t require_seed(const json& value, const std::string& field) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer()) {
        const long long v = value.get<long long>();
        if (v < 0) bad_field(field, "seed must be nonnegative");
        return static_cast<std::uint64_t>(v);
    }
    bad_field(field, "expected an integer seed");
}

std::vector<Height> require_height_array(const json& value, const std::string& field,
                                         std::size_t expected_len) {
    if (!value.is_array()) bad_field(field, "expected an array");
    if (value.size() != expected_len)
        bad_field(field, "expected " + std::to_string(expected_len) + " entries, got " +
                             std::to_string(value.size()));
    std::vector<Height> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i)
        out.push_back(require_int(value[i], field + "[" + std::to_string(i) + "]", 0));
    return out;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) bad_field(where + "." + it.key(), "unknown key");
}

std::shared_ptr<const Network> parse_network(const json& node, Strategy strategy) {
    if (!node.is_object() || node.size() != 1 || (!node.contains("grid") && !node.contains("graph")))
        bad_field("network", "expected exactly one of 'grid' or 'graph'");
    const bool needs_hub = strategy != Strategy::AsmOpen;

    if (node.contains("grid")) {
        const json& grid = node["grid"];
        reject_unknown_keys(grid, {"n", "neighborhood"}, "network.grid");
        GridSpec spec;
        spec.side = static_cast<int>(require_int(require(grid, "n"), "network.grid.n", 1));
        const std::string nb = require(grid, "neighborhood").get<std::string>();
        if (nb == "moore")
            spec.neighborhood = Neighborhood::Moore;
        else if (nb == "von_neumann")
            spec.neighborhood = Neighborhood::VonNeumann;
        else
            bad_field("network.grid.neighborhood", "expected 'moore' or 'von_neumann'");
        return std::make_shared<Network>(Network::grid(spec, needs_hub));
    }

    const json& graph = node["graph"];
    reject_unknown_keys(graph, {"p", "edges", "hub", "thresholds"}, "network.graph");
    const int p = static_cast<int>(require_int(require(graph, "p"), "network.graph.p", 1));
    const json& edges_json = require(graph, "edges");
    if (!edges_json.is_array()) bad_field("network.graph.edges", "expected an array of pairs");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(edges_json.size());
    for (const json& e : edges_json) {
        if (!e.is_array() || e.size() != 2)
            bad_field("network.graph.edges", "each edge is a [u,v] pair");
        edges.emplace_back(static_cast<NodeId>(require_int(e[0], "network.graph.edges.u", 1)),
                           static_cast<NodeId>(require_int(e[1], "network.graph.edges.v", 1)));
    }
    std::optional<NodeId> hub;
    if (graph.contains("hub"))
        hub = static_cast<NodeId>(require_int(graph["hub"], "network.graph.hub", 1));
    std::optional<std::vector<Height>> thresholds;
    if (graph.contains("thresholds"))
        thresholds = require_height_array(graph["thresholds"], "network.graph.thresholds",
                                          static_cast<std::size_t>(p));
    if (needs_hub && !hub)
        fail(ErrorCode::ValidationError,
             std::string("strategy '") + to_string(strategy) + "' needs a network hub");
    return std::make_shared<Network>(Network::graph(p, std::move(edges), hub, std::move(thresholds)));
}

json rational_json(const Rational& r) {
    return json{{"num", r.num}, {"den", r.den}, {"decimal", r.decimal()}};
}

json trace_json(const CascadeTrace& t) {
    json events = json::array();
    for (const auto& e : t.events) {
        json deliveries = json::array();
        for (const auto& [node, amount] : e.deliveries) deliveries.push_back({node, amount});
        events.push_back(json{{"node", e.node},
                              {"removed", e.removed},
                              {"deliveries", deliveries},
                              {"to_hub", e.to_hub},
                              {"lost", e.lost}});
    }
    return json{{"events", events},
                {"topplings", t.topplings},
                {"lost", t.lost},
                {"hub_receipts", t.hub_receipts}};
}

json step_json(const StepReport& r) {
    json moves = json::array();
    for (const Move& m : r.moves) moves.push_back({m.from, m.to, m.hub_fallback ? 1 : 0});
    json out{{"step", r.step},
             {"inflow", r.inflow},
             {"initial", r.initial},
             {"stabilized", r.stabilized},
             {"removal", r.removal},
             {"final", r.final_state},
             {"cascade", trace_json(r.cascade)},
             {"moves", moves},
             {"held", r.held},
             {"hub_peak", r.hub_peak},
             {"critical", json{{"margin", r.critical.margin},
                               {"near_capacity", r.critical.near_capacity},
                               {"overflow", r.critical.overflow},
                               {"count", r.critical.count()}}},
             {"ledger", json{{"before", r.ledger.before},
                             {"inflow", r.ledger.inflow},
                             {"dissipated", r.ledger.dissipated},
                             {"lost", r.ledger.lost},
                             {"after", r.ledger.after},
                             {"balanced", r.ledger.balanced()}}}};
    out["indicator_initial"] =
        r.indicator_initial ? rational_json(*r.indicator_initial) : json(nullptr);
    out["indicator_stabilized"] =
        r.indicator_stabilized ? rational_json(*r.indicator_stabilized) : json(nullptr);
    out["hub_load"] = r.hub_load ? json(*r.hub_load) : json(nullptr);
    return out;
}

std::string csv_indicator_fields(const std::optional<IndicatorValue>& f) {
    if (!f) return ",,";
    return std::to_string(f->num) + "," + std::to_string(f->den) + "," + f->decimal();
}

} // namespace

ScenarioSpec parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::SyntaxError, e.what());
    }
    if (!doc.is_object()) fail(ErrorCode::SyntaxError, "top level must be an object");
    reject_unknown_keys(doc,
                        {"name", "network", "ground_state", "strategy", "steps", "inflow",
                         "dissipation", "tiebreak", "margin", "caps", "output"},
                        "scenario");

    ScenarioSpec spec;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) bad_field("name", "expected a string");
        spec.name = doc["name"].get<std::string>();
    }

    if (doc.contains("strategy")) {
        const std::string s = require(doc, "strategy").get<std::string>();
        if (s == "srh")
            spec.strategy = Strategy::Srh;
        else if (s == "standard")
            spec.strategy = Strategy::Standard;
        else if (s == "asm_open")
            spec.strategy = Strategy::AsmOpen;
        else
            bad_field("strategy", "expected 'srh', 'standard' or 'asm_open'");
    }

    spec.net = parse_network(require(doc, "network"), spec.strategy);
    const std::size_t p = static_cast<std::size_t>(spec.net->size());

    spec.ground_state = require_height_array(require(doc, "ground_state"), "ground_state", p);
    if (!is_almost_stable(*spec.net, spec.ground_state)) {
        const auto bad = unstable_nodes(*spec.net, spec.ground_state);
        NodeId offender = bad.front();
        if (spec.net->hub() && offender == *spec.net->hub() && bad.size() > 1) offender = bad[1];
        bad_field("ground_state", "not almost stable (node " + std::to_string(offender) + ")");
    }

    if (doc.contains("steps"))
        spec.steps = static_cast<int>(require_int(doc["steps"], "steps", 0));

    if (doc.contains("inflow")) {
        const json& inflow = doc["inflow"];
        if (!inflow.is_object() || inflow.size() != 1 ||
            (!inflow.contains("explicit") && !inflow.contains("generator")))
            bad_field("inflow", "expected exactly one of 'explicit' or 'generator'");
        if (inflow.contains("explicit")) {
            const json& list = inflow["explicit"];
            if (!list.is_array()) bad_field("inflow.explicit", "expected an array of arrays");
            std::vector<Perturbation> schedule;
            schedule.reserve(list.size());
            for (std::size_t i = 0; i < list.size(); ++i)
                schedule.push_back(require_height_array(
                    list[i], "inflow.explicit[" + std::to_string(i) + "]", p));
            if (static_cast<int>(schedule.size()) != spec.steps)
                bad_field("inflow.explicit", "schedule length " + std::to_string(schedule.size()) +
                                                 " != steps " + std::to_string(spec.steps));
            spec.inflow = std::move(schedule);
        } else {
            const json& gen = inflow["generator"];
            reject_unknown_keys(gen, {"sites", "per_step", "seed"}, "inflow.generator");
            InflowGenerator generator;
            const json& sites = require(gen, "sites");
            if (sites.is_string()) {
                const std::string s = sites.get<std::string>();
                if (s == "hub")
                    generator.sites = InflowGenerator::Sites::Hub;
                else if (s == "uniform")
                    generator.sites = InflowGenerator::Sites::Uniform;
                else
                    bad_field("inflow.generator.sites", "expected 'hub', 'uniform' or weights");
            } else if (sites.is_array()) {
                generator.sites = InflowGenerator::Sites::Weighted;
                generator.weights = require_height_array(sites, "inflow.generator.sites", p);
                if (total(generator.weights) <= 0)
                    bad_field("inflow.generator.sites", "weights sum to zero");
            } else {
                bad_field("inflow.generator.sites", "expected 'hub', 'uniform' or weights");
            }
            if (generator.sites == InflowGenerator::Sites::Hub && !spec.net->hub())
                bad_field("inflow.generator.sites", "'hub' needs a network hub");
            if (gen.contains("per_step"))
                generator.per_step = require_int(gen["per_step"], "inflow.generator.per_step", 0);
            if (gen.contains("seed"))
                generator.seed = require_seed(gen["seed"], "inflow.generator.seed");
            spec.inflow = generator;
        }
    } else if (spec.steps > 0) {
        bad_field("inflow", "required when steps > 0");
    }

    if (doc.contains("dissipation")) {
        const json& d = doc["dissipation"];
        if (d.is_string()) {
            if (d.get<std::string>() != "none")
                bad_field("dissipation", "expected 'none', 'explicit' or 'random'");
            spec.dissipation = DissipationNone{};
        } else if (d.is_object() && d.size() == 1 && d.contains("explicit")) {
            const json& list = d["explicit"];
            if (!list.is_array()) bad_field("dissipation.explicit", "expected an array of arrays");
            DissipationExplicit explicit_policy;
            for (std::size_t i = 0; i < list.size(); ++i)
                explicit_policy.per_step.push_back(require_height_array(
                    list[i], "dissipation.explicit[" + std::to_string(i) + "]", p));
            if (static_cast<int>(explicit_policy.per_step.size()) != spec.steps)
                bad_field("dissipation.explicit", "schedule length != steps");
            spec.dissipation = std::move(explicit_policy);
        } else if (d.is_object() && d.size() == 1 && d.contains("random")) {
            const json& r = d["random"];
            reject_unknown_keys(r, {"seed", "budget"}, "dissipation.random");
            DissipationRandom random;
            if (r.contains("seed")) random.seed = require_seed(r["seed"], "dissipation.random.seed");
            const json& budget = require(r, "budget");
            if (budget.is_array()) {
                random.budgets.clear();
                for (std::size_t i = 0; i < budget.size(); ++i)
                    random.budgets.push_back(require_int(
                        budget[i], "dissipation.random.budget[" + std::to_string(i) + "]", 0));
                if (random.budgets.empty()) bad_field("dissipation.random.budget", "empty list");
            } else {
                random.budgets = {require_int(budget, "dissipation.random.budget", 0)};
            }
            spec.dissipation = random;
        } else {
            bad_field("dissipation", "expected 'none', {'explicit': ...} or {'random': ...}");
        }
    }

    if (doc.contains("tiebreak")) {
        const json& t = doc["tiebreak"];
        if (t.is_string()) {
            if (t.get<std::string>() != "lowest_id")
                bad_field("tiebreak", "expected 'lowest_id' or {'seed': n}");
            spec.tiebreak = TieBreak::lowest_id();
        } else if (t.is_object() && t.size() == 1 && t.contains("seed")) {
            spec.tiebreak = TieBreak::seeded(require_seed(t["seed"], "tiebreak.seed"));
        } else {
            bad_field("tiebreak", "expected 'lowest_id' or {'seed': n}");
        }
    }

    if (doc.contains("margin"))
        spec.critical_margin = require_int(doc["margin"], "margin", 0);

    if (doc.contains("caps")) {
        const json& caps = doc["caps"];
        reject_unknown_keys(caps, {"max_topplings", "max_moves"}, "caps");
        if (caps.contains("max_topplings"))
            spec.caps.max_topplings = require_int(caps["max_topplings"], "caps.max_topplings", 1);
        if (caps.contains("max_moves"))
            spec.caps.max_moves = require_int(caps["max_moves"], "caps.max_moves", 1);
    }

    if (doc.contains("output")) {
        const json& out = doc["output"];
        reject_unknown_keys(out, {"format", "path"}, "output");
        if (out.contains("format")) spec.output_format = out["format"].get<std::string>();
        if (out.contains("path")) spec.output_path = out["path"].get<std::string>();
    }
    return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    if (spec.net->is_grid()) {
        const GridSpec& grid = *spec.net->grid_spec();
        doc["network"] = {{"grid",
                           {{"n", grid.side},
                            {"neighborhood", grid.neighborhood == Neighborhood::Moore
                                                 ? "moore"
                                                 : "von_neumann"}}}};
    } else {
        json edges = json::array();
        for (const auto& [u, v] : spec.net->edges()) edges.push_back({u, v});
        json graph{{"p", spec.net->size()}, {"edges", edges}};
        if (spec.net->hub()) graph["hub"] = *spec.net->hub();
        json thresholds = json::array();
        for (NodeId v = 1; v <= spec.net->size(); ++v) thresholds.push_back(spec.net->threshold(v));
        graph["thresholds"] = thresholds;
        doc["network"] = {{"graph", graph}};
    }
    doc["ground_state"] = spec.ground_state;
    doc["strategy"] = to_string(spec.strategy);
    doc["steps"] = spec.steps;
    if (const auto* explicit_list = std::get_if<std::vector<Perturbation>>(&spec.inflow)) {
        doc["inflow"] = {{"explicit", *explicit_list}};
    } else {
        const auto& gen = std::get<InflowGenerator>(spec.inflow);
        json g{{"per_step", gen.per_step}, {"seed", gen.seed}};
        switch (gen.sites) {
            case InflowGenerator::Sites::Hub: g["sites"] = "hub"; break;
            case InflowGenerator::Sites::Uniform: g["sites"] = "uniform"; break;
            case InflowGenerator::Sites::Weighted: g["sites"] = gen.weights; break;
        }
        doc["inflow"] = {{"generator", g}};
    }
    if (std::holds_alternative<DissipationNone>(spec.dissipation)) {
        doc["dissipation"] = "none";
    } else if (const auto* d = std::get_if<DissipationExplicit>(&spec.dissipation)) {
        doc["dissipation"] = {{"explicit", d->per_step}};
    } else {
        const auto& random = std::get<DissipationRandom>(spec.dissipation);
        doc["dissipation"] = {{"random", {{"seed", random.seed}, {"budget", random.budgets}}}};
    }
    doc["tiebreak"] = spec.tiebreak.random ? json{{"seed", spec.tiebreak.seed}} : json("lowest_id");
    doc["margin"] = spec.critical_margin;
    doc["caps"] = {{"max_topplings", spec.caps.max_topplings}, {"max_moves", spec.caps.max_moves}};
    if (!spec.output_format.empty() || !spec.output_path.empty()) {
        json out;
        if (!spec.output_format.empty()) out["format"] = spec.output_format;
        if (!spec.output_path.empty()) out["path"] = spec.output_path;
        doc["output"] = out;
    }
    return doc.dump(2) + "\n";
}

std::string step_report_json(const StepReport& report) {
    return step_json(report).dump(2) + "\n";
}

std::string run_report_json(const RunReport& report) {
    json steps = json::array();
    for (const StepReport& s : report.steps) steps.push_back(step_json(s));
    json events = json::array();
    for (const CollapseEvent& e : report.collapse_events)
        events.push_back(json{{"step", e.step}, {"kind", e.kind}, {"transient", e.transient}});
    json doc{{"scenario", report.scenario},
             {"strategy", to_string(report.strategy)},
             {"steps", steps},
             {"inflow_total", report.inflow_total},
             {"dissipated_total", report.dissipated_total},
             {"lost_total", report.lost_total},
             {"balance_holds", report.balance_holds},
             {"collapse_events", events},
             {"final_state", report.final_state}};
    return doc.dump(2) + "\n";
}

std::string comparison_json(const ComparisonReport& report, const std::string& scenario) {
    auto side_json = [](const ComparisonReport::Side& s) {
        json out{{"label", s.label},
                 {"critical_count", s.critical_count},
                 {"total_mass", s.total_mass}};
        out["indicator"] = s.indicator ? rational_json(*s.indicator) : json(nullptr);
        out["hub_load"] = s.hub_load ? json(*s.hub_load) : json(nullptr);
        return out;
    };
    json doc{{"scenario", scenario},
             {"a", side_json(report.a)},
             {"b", side_json(report.b)},
             {"critical_delta", report.critical_delta},
             {"mass_delta", report.mass_delta}};
    doc["indicator_delta"] =
        report.indicator_delta ? rational_json(*report.indicator_delta) : json(nullptr);
    doc["hub_delta"] = report.hub_delta ? json(*report.hub_delta) : json(nullptr);
    doc["preferred"] = report.preferred
                           ? json(*report.preferred == 0 ? report.a.label : report.b.label)
                           : json(nullptr);
    return doc.dump(2) + "\n";
}

std::string run_report_csv(const RunReport& report) {
    std::string out =
        "scenario,strategy,step,F_num,F_den,F_decimal,critical_count,hub_load,total_mass\n";
    for (const StepReport& s : report.steps) {
        out += report.scenario;
        out += ",";
        out += to_string(report.strategy);
        out += "," + std::to_string(s.step);
        out += "," + csv_indicator_fields(s.indicator_stabilized);
        out += "," + std::to_string(s.critical.count());
        out += ",";
        if (s.hub_load) out += std::to_string(*s.hub_load);
        out += "," + std::to_string(total(s.final_state));
        out += "\n";
    }
    return out;
}

std::string comparison_csv(const ComparisonReport& report, const std::string& scenario) {
    std::string out = "scenario,strategy,F_num,F_den,F_decimal,critical_count,hub_load,total_mass\n";
    for (const ComparisonReport::Side* side : {&report.a, &report.b}) {
        out += scenario + "," + side->label;
        out += "," + csv_indicator_fields(side->indicator);
        out += "," + std::to_string(side->critical_count);
        out += ",";
        if (side->hub_load) out += std::to_string(*side->hub_load);
        out += "," + std::to_string(side->total_mass);
        out += "\n";
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::ValidationError, "cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) fail(ErrorCode::ValidationError, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

} // namespace sandnet
