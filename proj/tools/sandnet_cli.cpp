// Command-line front end: scenario-driven cascades, workflow steps, full
// runs, strategy comparison, grid rendering and the built-in verification
// gallery.

#include "sandnet/sandnet.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace sandnet;

constexpr int kExitValidation = 2;
constexpr int kExitVerifyFailed = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::ValidationError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& bytes, const std::string& out_path) {
    if (out_path.empty())
        std::cout << bytes;
    else
        write_file_atomic(out_path, bytes);
}

Strategy parse_strategy(const std::string& name) {
    if (name == "srh") return Strategy::Srh;
    if (name == "standard") return Strategy::Standard;
    if (name == "asm_open") return Strategy::AsmOpen;
    fail(ErrorCode::ValidationError, "unknown strategy '" + name + "'");
}

struct CommonArgs {
    std::string scenario_path;
    std::string strategy;
    std::string format;
    std::string out_path;
    std::optional<std::uint64_t> seed;
};

ScenarioSpec load_spec(const CommonArgs& args) {
    ScenarioSpec spec = parse_scenario(slurp(args.scenario_path));
    if (!args.strategy.empty()) spec.strategy = parse_strategy(args.strategy);
    if (args.seed) {
        // One master seed drives every random component.
        spec.tiebreak = TieBreak::seeded(*args.seed);
        if (auto* gen = std::get_if<InflowGenerator>(&spec.inflow)) gen->seed = *args.seed;
        if (auto* random = std::get_if<DissipationRandom>(&spec.dissipation))
            random->seed = *args.seed;
    }
    return spec;
}

std::string chosen_format(const CommonArgs& args, const ScenarioSpec& spec,
                          const std::string& fallback) {
    if (!args.format.empty()) return args.format;
    if (!spec.output_format.empty()) return spec.output_format;
    return fallback;
}

std::string chosen_out(const CommonArgs& args, const ScenarioSpec& spec) {
    if (!args.out_path.empty()) return args.out_path;
    return spec.output_path;
}

std::string matrix_text(const Network& net, const Configuration& heights) {
    std::ostringstream out;
    if (net.is_grid()) {
        const int n = net.grid_spec()->side;
        for (int r = 1; r <= n; ++r) {
            for (int c = 1; c <= n; ++c) {
                if (c > 1) out << ' ';
                out << heights[index_of(*net.grid_spec(), r, c) - 1];
            }
            out << '\n';
        }
    } else {
        for (std::size_t i = 0; i < heights.size(); ++i)
            out << (i + 1) << ": " << heights[i] << '\n';
    }
    return out.str();
}

std::string step_text(const StepReport& report) {
    std::ostringstream out;
    out << "final configuration:\n" << matrix_text(*report.net, report.final_state);
    if (report.indicator_initial)
        out << "F(initial)    = " << report.indicator_initial->decimal() << "\n";
    if (report.indicator_stabilized)
        out << "F(stabilized) = " << report.indicator_stabilized->decimal() << "\n";
    out << "critical nodes (margin " << report.critical.margin << "): " << report.critical.count()
        << ", overflowing: " << report.critical.overflow.size() << "\n";
    if (report.hub_load) out << "hub load " << *report.hub_load << ", peak " << report.hub_peak
                             << "\n";
    const OccupancySummary occupancy = occupancy_summary(*report.net, report.final_state);
    out << "occupancy: total " << occupancy.total << ", max " << occupancy.max
        << ", mean fraction " << occupancy.mean_fraction << "\n";
    out << "topplings " << report.cascade.topplings << ", moves " << report.moves.size()
        << ", lost " << report.ledger.lost << ", dissipated " << report.ledger.dissipated << "\n";
    return out.str();
}

StepReport first_step(const ScenarioSpec& spec, bool with_dissipation) {
    ScenarioSpec one = spec;
    one.steps = 1;
    if (auto* explicit_list = std::get_if<std::vector<Perturbation>>(&one.inflow)) {
        if (explicit_list->empty()) fail(ErrorCode::ScheduleExhausted, "empty inflow schedule");
        explicit_list->resize(1);
    }
    if (!with_dissipation) one.dissipation = DissipationNone{};
    if (auto* explicit_zeta = std::get_if<DissipationExplicit>(&one.dissipation)) {
        if (explicit_zeta->per_step.empty())
            fail(ErrorCode::ScheduleExhausted, "empty dissipation schedule");
        explicit_zeta->per_step.resize(1);
    }
    RunReport run = run_scenario(one);
    return std::move(run.steps.front());
}

int cmd_stabilize(const CommonArgs& args) {
    ScenarioSpec spec = load_spec(args);
    if (spec.strategy == Strategy::Standard)
        fail(ErrorCode::ValidationError,
             "stabilize applies toppling policies; use 'step' for the standard strategy");
    const StepReport report = first_step(spec, /*with_dissipation=*/false);
    const std::string format = chosen_format(args, spec, "text");
    if (format == "report")
        emit(step_report_json(report), chosen_out(args, spec));
    else if (format == "text")
        emit(step_text(report), chosen_out(args, spec));
    else
        fail(ErrorCode::ValidationError, "stabilize supports --format text|report");
    return 0;
}

int cmd_step(const CommonArgs& args) {
    ScenarioSpec spec = load_spec(args);
    const StepReport report = first_step(spec, /*with_dissipation=*/true);
    const std::string format = chosen_format(args, spec, "text");
    if (format == "report") {
        emit(step_report_json(report), chosen_out(args, spec));
    } else if (format == "csv") {
        RunReport wrapper;
        wrapper.scenario = spec.name;
        wrapper.strategy = spec.strategy;
        wrapper.steps.push_back(report);
        emit(run_report_csv(wrapper), chosen_out(args, spec));
    } else if (format == "text") {
        emit(step_text(report), chosen_out(args, spec));
    } else {
        fail(ErrorCode::ValidationError, "step supports --format text|report|csv");
    }
    return 0;
}

int cmd_run(const CommonArgs& args) {
    ScenarioSpec spec = load_spec(args);
    const RunReport run = run_scenario(spec);
    const std::string format = chosen_format(args, spec, "report");
    if (format == "report")
        emit(run_report_json(run), chosen_out(args, spec));
    else if (format == "csv")
        emit(run_report_csv(run), chosen_out(args, spec));
    else
        fail(ErrorCode::ValidationError, "run supports --format report|csv");
    return 0;
}

int cmd_compare(const CommonArgs& args, const std::string& strategy_a,
                const std::string& strategy_b) {
    ScenarioSpec spec = load_spec(args);
    ScenarioSpec spec_a = spec, spec_b = spec;
    spec_a.strategy = parse_strategy(strategy_a);
    spec_b.strategy = parse_strategy(strategy_b);
    const RunReport run_a = run_scenario(spec_a);
    const RunReport run_b = run_scenario(spec_b);
    if (run_a.steps.empty()) fail(ErrorCode::ValidationError, "nothing to compare: zero steps");
    const ComparisonReport cmp =
        compare(run_a.steps.back(), run_b.steps.back(), strategy_a, strategy_b);

    const std::string format = chosen_format(args, spec, "text");
    if (format == "report") {
        emit(comparison_json(cmp, spec.name), chosen_out(args, spec));
    } else if (format == "csv") {
        emit(comparison_csv(cmp, spec.name), chosen_out(args, spec));
    } else if (format == "text") {
        std::ostringstream out;
        auto line = [&](const ComparisonReport::Side& s) {
            out << s.label << ": F = " << (s.indicator ? s.indicator->decimal() : "n/a")
                << ", critical " << s.critical_count << ", hub "
                << (s.hub_load ? std::to_string(*s.hub_load) : "n/a") << ", mass "
                << s.total_mass << "\n";
        };
        line(cmp.a);
        line(cmp.b);
        out << "preferred: "
            << (cmp.preferred ? (*cmp.preferred == 0 ? cmp.a.label : cmp.b.label) : "tie")
            << " (smaller indicator)\n";
        emit(out.str(), chosen_out(args, spec));
    } else {
        fail(ErrorCode::ValidationError, "compare supports --format text|report|csv");
    }
    return 0;
}

int cmd_render(const CommonArgs& args, const std::string& state, int cell_px) {
    ScenarioSpec spec = load_spec(args);
    if (!args.format.empty() && args.format != "image")
        fail(ErrorCode::ValidationError, "render only emits --format image");
    Configuration heights = spec.ground_state;
    if (state == "initial") {
        heights = add_inflow(spec.ground_state, inflow_at(spec.inflow, *spec.net, 0));
    } else if (state == "final") {
        heights = run_scenario(spec).final_state;
    } else if (state != "ground") {
        fail(ErrorCode::ValidationError, "render supports --state ground|initial|final");
    }
    const std::string out = chosen_out(args, spec);
    if (out.empty()) fail(ErrorCode::ValidationError, "render needs --out PATH");
    emit(render_grid_ppm(*spec.net, heights, ColorMap::standard(), cell_px), out);
    return 0;
}

int cmd_verify(const std::string& out_path) {
    const VerifyReport report = verify_reference_cases();
    emit(report.table(), out_path);
    return report.all_pass() ? 0 : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sandpile-based patient load balancing over hospital networks"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string strategy_a = "standard", strategy_b = "srh";
    std::string render_state = "ground";
    int cell_px = 32;

    const auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
        if (needs_scenario)
            cmd->add_option("--scenario", args.scenario_path, "scenario file (JSON)")->required();
        cmd->add_option("--strategy", args.strategy, "override: srh|standard|asm_open");
        cmd->add_option("--format", args.format, "output format: csv|report|text|image");
        cmd->add_option("--out", args.out_path, "write output to this path (atomic)");
        cmd->add_option("--seed", args.seed, "override every random seed in the scenario");
    };

    CLI::App* stabilize = app.add_subcommand("stabilize", "run one cascade (no dissipation)");
    add_common(stabilize);
    CLI::App* step = app.add_subcommand("step", "run one workflow iteration");
    add_common(step);
    CLI::App* run = app.add_subcommand("run", "run the full scenario");
    add_common(run);
    CLI::App* cmp = app.add_subcommand("compare", "run two strategies on the same scenario");
    add_common(cmp);
    cmp->add_option("--strategy-a", strategy_a, "first strategy (default standard)");
    cmp->add_option("--strategy-b", strategy_b, "second strategy (default srh)");
    CLI::App* render = app.add_subcommand("render", "render a grid configuration as a pixmap");
    add_common(render);
    render->add_option("--state", render_state, "ground|initial|final (default ground)");
    render->add_option("--cell-px", cell_px, "pixels per cell (default 32)");
    CLI::App* verify = app.add_subcommand("verify", "replay the built-in reference gallery");
    verify->add_option("--out", args.out_path, "write the table to this path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (stabilize->parsed()) return cmd_stabilize(args);
        if (step->parsed()) return cmd_step(args);
        if (run->parsed()) return cmd_run(args);
        if (cmp->parsed()) return cmd_compare(args, strategy_a, strategy_b);
        if (render->parsed()) return cmd_render(args, render_state, cell_px);
        if (verify->parsed()) return cmd_verify(args.out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
