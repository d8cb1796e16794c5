#include <CLI11.hpp>

#include "trp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"MITL temporal-robustness planner over time-varying transition systems "
                 "and MDPs"};
    app.require_subcommand(1);

    trp::RunConfig cfg;
    std::string variant = "right";

    auto add_common = [&](CLI::App* sub, bool needs_tasks) {
        sub->add_option("--horizon", cfg.horizon, "planning horizon T")->required();
        sub->add_option("--tprime", cfg.robustness_window,
                        "right-robustness window T' (default 2)");
        sub->add_option("--variant", variant, "robustness variant: left|right|combined");
        sub->add_flag("--until-closed", cfg.until_closed,
                      "Until holds its left operand through the witness point");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--time-limit", cfg.time_limit_s, "solver time limit, seconds");
        sub->add_option("--out", cfg.out_dir, "output directory (default .)");
        if (needs_tasks)
            sub->add_option("--tasks", cfg.tasks_path, "task file: `<priority> ; <formula>`")
                ->required();
    };

    auto* plan_vwts = app.add_subcommand(
        "plan-vwts", "maximum-robustness path on a time-varying transition system");
    plan_vwts->add_option("--env", cfg.env_path, "environment JSON")->required();
    add_common(plan_vwts, true);
    plan_vwts->add_flag("--emit-mps", cfg.emit_mps, "also export the model in MPS format");

    auto* plan_mdp =
        app.add_subcommand("plan-mdp", "expected-robustness strategy via the occupancy LP");
    plan_mdp->add_option("--mdp", cfg.mdp_path, "MDP JSON")->required();
    add_common(plan_mdp, true);

    auto* plan_rec = app.add_subcommand(
        "plan-receding", "receding-horizon plan with a worst-case lookahead bound");
    plan_rec->add_option("--mdp", cfg.mdp_path, "MDP JSON")->required();
    plan_rec->add_option("--receding", cfg.receding, "receding horizon T_r")->required();
    add_common(plan_rec, true);

    auto* simulate =
        app.add_subcommand("simulate", "sample executions (replanning when --receding)");
    simulate->add_option("--mdp", cfg.mdp_path, "MDP JSON")->required();
    simulate->add_option("--receding", cfg.receding, "receding horizon T_r (0: full plan)");
    simulate->add_option("--runs", cfg.runs, "number of seeded executions");
    add_common(simulate, true);

    auto* bench = app.add_subcommand("bench", "scaling sweeps, CSV + SVG output");
    bench->add_option("--bench-states", cfg.bench_states, "VWTS sizes to sweep");
    bench->add_option("--bench-tasks", cfg.bench_tasks, "task counts to sweep");
    bench->add_option("--bench-horizons", cfg.bench_horizons, "horizons to sweep");
    bench->add_option("--bench-recedings", cfg.bench_recedings, "MDP receding horizons");
    bench->add_option("--bench-solve-limit", cfg.bench_solve_limit_s,
                      "also solve VWTS cells with this time limit (0: encode only)");
    bench->add_flag("--bench-mdp,!--no-bench-mdp", cfg.bench_mdp_part,
                    "include the MDP part (default on)");
    bench->add_option("--tprime", cfg.robustness_window, "robustness window");
    bench->add_option("--seed", cfg.seed, "random seed");
    bench->add_option("--time-limit", cfg.time_limit_s, "per-MILP time limit, seconds");
    bench->add_option("--out", cfg.out_dir, "output directory");

    auto* oracle = app.add_subcommand(
        "oracle-check", "differential suite against the brute-force oracles");
    oracle->add_option("--seed", cfg.seed, "random seed");
    oracle->add_option("--cases", cfg.oracle_cases, "MILP/oracle instances");
    oracle->add_option("--word-cases", cfg.oracle_word_cases, "robustness cases");
    oracle->add_option("--mdp-cases", cfg.oracle_mdp_cases, "MDP instances");
    oracle->add_option("--out", cfg.out_dir, "output directory");

    auto* plot = app.add_subcommand("plot", "render a bench CSV into an SVG");
    std::string csv_path, svg_path = "bench.svg";
    plot->add_option("csv", csv_path, "bench.csv path")->required();
    plot->add_option("svg", svg_path, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.variant = trp::variant_from_name(variant);
    } catch (const trp::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    if (plot->parsed()) return trp::render_plot(csv_path, svg_path);
    if (plan_vwts->parsed()) cfg.mode = trp::RunMode::PlanVwts;
    else if (plan_mdp->parsed()) cfg.mode = trp::RunMode::PlanMdp;
    else if (plan_rec->parsed()) cfg.mode = trp::RunMode::PlanReceding;
    else if (simulate->parsed()) cfg.mode = trp::RunMode::Simulate;
    else if (bench->parsed()) cfg.mode = trp::RunMode::Bench;
    else if (oracle->parsed()) cfg.mode = trp::RunMode::OracleCheck;
    return trp::run(cfg);
}
