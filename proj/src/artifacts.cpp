#include "trp/cli.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "trp/bench.hpp"
#include "trp/encoding.hpp"
#include "trp/instances.hpp"
#include "trp/occupancy.hpp"
#include "trp/oracle.hpp"
#include "trp/parallel.hpp"
#include "trp/parser.hpp"
#include "trp/receding.hpp"

namespace trp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

UntilSemantics until_of(const RunConfig& cfg) {
    return cfg.until_closed ? UntilSemantics::IncludeEnd : UntilSemantics::ExcludeEnd;
}

json word_json(const TimedWord& w) {
    json arr = json::array();
    for (const auto& e : w.entries) {
        json labels = json::array();
        for (const auto& l : e.labels) labels.push_back(l);
        arr.push_back({{"time", e.time}, {"labels", labels}});
    }
    return arr;
}

json strategy_json(const HistoryTree& tree, const Strategy& strategy) {
    json out = json::object();
    for (int id = 0; id < tree.size(); ++id) {
        if (tree.absorbed(id)) continue;
        json dist = json::object();
        for (const auto& [target, p] : strategy.choice[id])
            dist[tree.mdp().state_name(target)] = p;
        out[tree.trace_key(id)] = std::move(dist);
    }
    return out;
}

int run_plan_vwts(const RunConfig& cfg) {
    const Vwts ts = Vwts::load_file(cfg.env_path);
    const TaskSet tasks = load_task_file(cfg.tasks_path);
    EncodingConfig ecfg;
    ecfg.horizon = cfg.horizon;
    ecfg.robustness_window = cfg.robustness_window;
    ecfg.variant = cfg.variant;
    ecfg.until = until_of(cfg);

    const Problem1 enc = build_problem1(ts, tasks, ecfg);
    if (cfg.emit_mps) {
        std::ofstream mps(fs::path(cfg.out_dir) / "model.mps", std::ios::binary);
        write_mps(enc.model, mps);
        std::cout << (fs::path(cfg.out_dir) / "model.mps").string() << "\n";
    }
    SolveOptions sopts;
    sopts.time_limit_s = cfg.time_limit_s;
    const SolveResult sol = solve_milp(enc.model, sopts);
    if (sol.status == SolveStatus::Infeasible) {
        std::cerr << "infeasible: no path within the horizon satisfies the constraints\n";
        return 2;
    }
    if (sol.status != SolveStatus::Optimal) {
        std::cerr << "solver stopped: " << status_name(sol.status) << "\n";
        return 3;
    }
    std::string why;
    if (!check_feasible(enc.model, sol.assignment, 1e-6, true, 1e-6, &why))
        throw ModelError("solution failed replay: " + why);
    const DecodedSolution dec = decode(enc, ts, tasks, sol);

    json tasks_j = json::array();
    for (std::size_t i = 0; i < tasks.tasks.size(); ++i)
        tasks_j.push_back({{"formula", print_formula(tasks.tasks[i].formula)},
                           {"priority", tasks.tasks[i].priority},
                           {"robustness", dec.task_robustness[i]}});
    json path_j = json::array();
    for (int s : dec.path.states) path_j.push_back(ts.state_name(s));
    json out = {
        {"mode", "plan-vwts"},
        {"variant", variant_name(cfg.variant)},
        {"horizon", cfg.horizon},
        {"tprime", cfg.robustness_window},
        {"objective", dec.objective},
        {"tasks", tasks_j},
        {"path", path_j},
        {"times", dec.times.times},
        {"word", word_json(dec.word)},
        {"solver", {{"nodes", sol.nodes}, {"iterations", sol.iterations}}},
    };
    write_json(fs::path(cfg.out_dir) / "solution.json", out);
    std::cout << (fs::path(cfg.out_dir) / "solution.json").string() << "\n";
    std::cerr << "objective " << dec.objective << " in " << sol.wall_seconds << "s\n";
    return 0;
}

int run_plan_mdp(const RunConfig& cfg) {
    const LabeledMdp mdp = LabeledMdp::load_file(cfg.mdp_path);
    const TaskSet tasks = load_task_file(cfg.tasks_path);
    RewardOptions ropts{cfg.variant, cfg.robustness_window, until_of(cfg)};
    SolveOptions sopts;
    sopts.time_limit_s = cfg.time_limit_s;
    const FullHorizonPlan plan = plan_full_horizon(mdp, tasks, cfg.horizon, ropts, {}, sopts);

    // independent validity replay before anything is written
    const std::vector<double> propagated =
        propagate_occupancy(plan.tree, plan.lp, plan.strategy);
    for (std::size_t i = 0; i < propagated.size(); ++i)
        if (std::abs(propagated[i] - plan.solution.assignment[i]) > 1e-7)
            throw ModelError("strategy replay diverges from the LP occupancy measures");

    std::vector<double> rewards(plan.lp.rewards);
    const double ml = memoryless_value(plan.tree, rewards, plan.strategy);
    json out = {
        {"mode", "plan-mdp"},
        {"variant", variant_name(cfg.variant)},
        {"horizon", cfg.horizon},
        {"tprime", cfg.robustness_window},
        {"value", plan.value},
        {"memoryless_value", ml},
        {"memoryless_matches", std::abs(ml - plan.value) <= 1e-6},
        {"histories", plan.tree.size()},
        {"lpvars", plan.lp.model.vars.size()},
        {"lpconst", plan.lp.model.cons.size()},
    };
    write_json(fs::path(cfg.out_dir) / "plan.json", out);
    write_json(fs::path(cfg.out_dir) / "strategy.json",
               strategy_json(plan.tree, plan.strategy));
    std::cout << (fs::path(cfg.out_dir) / "plan.json").string() << "\n"
              << (fs::path(cfg.out_dir) / "strategy.json").string() << "\n";
    std::cerr << "value " << plan.value << " (encode " << plan.encode_seconds << "s, solve "
              << plan.solve_seconds << "s)\n";
    return 0;
}

RecedingConfig receding_config(const RunConfig& cfg) {
    RecedingConfig rc;
    rc.horizon = cfg.horizon;
    rc.receding = cfg.receding;
    rc.robustness_window = cfg.robustness_window;
    rc.variant = cfg.variant;
    rc.until = until_of(cfg);
    rc.solver.time_limit_s = cfg.time_limit_s;
    rc.workers = worker_count();
    return rc;
}

int run_plan_receding(const RunConfig& cfg) {
    const LabeledMdp mdp = LabeledMdp::load_file(cfg.mdp_path);
    const TaskSet tasks = load_task_file(cfg.tasks_path);
    const RecedingConfig rc = receding_config(cfg);
    RewardCache cache;
    const RecedingPlan plan =
        plan_receding(mdp, tasks, rc, std::min(cfg.receding, cfg.horizon), {}, &cache);

    const std::vector<double> propagated =
        propagate_occupancy(plan.tree, plan.lp, plan.strategy);
    for (std::size_t i = 0; i < propagated.size(); ++i)
        if (std::abs(propagated[i] - plan.solution.assignment[i]) > 1e-7)
            throw ModelError("strategy replay diverges from the LP occupancy measures");

    json out = {
        {"mode", "plan-receding"},
        {"variant", variant_name(cfg.variant)},
        {"horizon", cfg.horizon},
        {"receding", cfg.receding},
        {"tprime", cfg.robustness_window},
        {"bound", plan.bound},
        {"histories", plan.tree.size()},
        {"reward_milps", plan.reward_milps},
        {"lpvars", plan.lp.model.vars.size()},
        {"lpconst", plan.lp.model.cons.size()},
    };
    write_json(fs::path(cfg.out_dir) / "plan.json", out);
    write_json(fs::path(cfg.out_dir) / "strategy.json",
               strategy_json(plan.tree, plan.strategy));
    std::cout << (fs::path(cfg.out_dir) / "plan.json").string() << "\n"
              << (fs::path(cfg.out_dir) / "strategy.json").string() << "\n";
    std::cerr << "worst-case bound " << plan.bound << " (encode " << plan.encode_seconds
              << "s, " << plan.reward_milps << " reward MILPs)\n";
    return 0;
}

int run_simulate(const RunConfig& cfg) {
    const LabeledMdp mdp = LabeledMdp::load_file(cfg.mdp_path);
    const TaskSet tasks = load_task_file(cfg.tasks_path);
    json runs = json::array();
    std::ofstream log(fs::path(cfg.out_dir) / "replan_log.jsonl", std::ios::binary);

    if (cfg.receding > 0) {
        const RecedingConfig rc = receding_config(cfg);
        RewardCache cache;
        for (int r = 0; r < cfg.runs; ++r) {
            const ExecutionResult res =
                execute_with_replanning(mdp, tasks, rc, cfg.seed + r, &cache);
            json trace = json::array();
            for (const auto& step : res.trace)
                trace.push_back({{"state", mdp.state_name(step.state)},
                                 {"time", step.time},
                                 {"clamped", step.clamped}});
            runs.push_back({{"seed", cfg.seed + r},
                            {"realized", res.realized},
                            {"bounds", res.bounds},
                            {"trace", trace}});
            for (const auto& rec : res.log) {
                json line = {{"run", r},
                             {"replanning", rec.replanning},
                             {"boundary", rec.boundary},
                             {"pinned", rec.pinned_trace},
                             {"bound", rec.bound},
                             {"wall_seconds", rec.wall_seconds}};
                log << line.dump() << "\n";
            }
        }
    } else {
        RewardOptions ropts{cfg.variant, cfg.robustness_window, until_of(cfg)};
        SolveOptions sopts;
        sopts.time_limit_s = cfg.time_limit_s;
        const FullHorizonPlan plan =
            plan_full_horizon(mdp, tasks, cfg.horizon, ropts, {}, sopts);
        Rng rng(cfg.seed);
        for (int r = 0; r < cfg.runs; ++r) {
            const int leaf = sample_rollout(plan.tree, plan.strategy, rng);
            json trace = json::array();
            for (const auto& [s, t] : plan.tree.trace(leaf))
                trace.push_back({{"state", mdp.state_name(s)}, {"time", t}});
            runs.push_back({{"seed", cfg.seed},
                            {"realized", plan.lp.rewards[static_cast<std::size_t>(leaf)]},
                            {"bounds", json::array({plan.value})},
                            {"trace", trace}});
        }
    }
    json out = {{"mode", "simulate"},
                {"variant", variant_name(cfg.variant)},
                {"horizon", cfg.horizon},
                {"receding", cfg.receding},
                {"runs", runs}};
    write_json(fs::path(cfg.out_dir) / "summary.json", out);
    std::cout << (fs::path(cfg.out_dir) / "summary.json").string() << "\n";
    return 0;
}

int run_bench(const RunConfig& cfg) {
    VwtsBenchParams vp;
    vp.states = cfg.bench_states;
    vp.tasks = cfg.bench_tasks;
    vp.horizons = cfg.bench_horizons;
    vp.robustness_window = cfg.robustness_window;
    vp.seed = cfg.seed + 1;
    vp.solve_limit_s = cfg.bench_solve_limit_s;
    vp.workers = worker_count();
    std::vector<BenchRow> rows = bench_vwts(vp);

    if (cfg.bench_mdp_part) {
        MdpBenchParams mp;
        mp.recedings = cfg.bench_recedings;
        mp.seed = cfg.seed + 1;
        mp.workers = worker_count();
        mp.milp_time_limit_s = cfg.time_limit_s;
        const auto mdp_rows = bench_mdp(mp);
        rows.insert(rows.end(), mdp_rows.begin(), mdp_rows.end());
    }

    std::ofstream csv(fs::path(cfg.out_dir) / "bench.csv", std::ios::binary);
    write_bench_csv(rows, csv);
    std::ofstream svg(fs::path(cfg.out_dir) / "bench.svg", std::ios::binary);
    write_bench_svg(rows, svg);
    std::cout << (fs::path(cfg.out_dir) / "bench.csv").string() << "\n"
              << (fs::path(cfg.out_dir) / "bench.svg").string() << "\n";
    return 0;
}

int run_oracle_check(const RunConfig& cfg) {
    int failures = 0;

    // robustness differential: evaluator vs literal shift scan
    {
        std::atomic<int> bad{0};
        parallel_for(static_cast<std::size_t>(cfg.oracle_word_cases), [&](std::size_t i) {
            Rng rng(cfg.seed * 7919 + i);
            const std::vector<std::string> atoms{"a", "b", "c"};
            FormulaGenOptions fopts;
            fopts.max_depth = 3;
            const Formula f = random_formula(rng, atoms, fopts);
            const TimedWord w = random_word(rng, atoms, 8, 14);
            EvalOptions opts;
            opts.until = rng.bernoulli(0.5) ? UntilSemantics::ExcludeEnd
                                            : UntilSemantics::IncludeEnd;
            opts.negative_padding = rng.uniform_int(0, 4);
            const RobustnessVariant variant =
                static_cast<RobustnessVariant>(rng.uniform_int(0, 2));
            const int t = rng.uniform_int(w.start_time(), w.horizon());
            if (robustness(f, w, t, variant, opts) !=
                oracle::shift_scan_robustness(f, w, t, variant, opts))
                ++bad;
        });
        failures += bad.load();
        std::cout << (bad.load() == 0 ? "PASS" : "FAIL") << " robustness differential ("
                  << cfg.oracle_word_cases << " cases)\n";
    }

    // Problem 1 MILP vs exhaustive path enumeration
    {
        std::atomic<int> bad{0};
        parallel_for(static_cast<std::size_t>(cfg.oracle_cases), [&](std::size_t i) {
            Rng rng(cfg.seed * 104729 + i);
            VwtsGenOptions vopts;
            vopts.num_states = rng.uniform_int(3, 4);
            vopts.extra_edges = rng.uniform_int(0, 2);
            vopts.horizon = rng.uniform_int(6, 9);
            const Vwts ts = random_vwts(rng, vopts);
            TaskSet tasks;
            FormulaGenOptions fopts;
            fopts.max_depth = 2;
            fopts.max_interval = 3;
            const std::vector<std::string> atoms(ts.atoms().begin(), ts.atoms().end());
            const int ntasks = rng.uniform_int(1, 2);
            for (int k = 0; k < ntasks; ++k)
                tasks.tasks.push_back({random_formula(rng, atoms.empty() ? std::vector<std::string>{"a"} : atoms, fopts),
                                       static_cast<double>(rng.uniform_int(1, 3))});
            EncodingConfig ecfg;
            ecfg.horizon = std::max(vopts.horizon, tasks.max_horizon() + 1);
            ecfg.robustness_window = rng.uniform_int(1, 3);
            ecfg.variant =
                rng.bernoulli(0.5) ? RobustnessVariant::Right : RobustnessVariant::Left;
            const Problem1 enc = build_problem1(ts, tasks, ecfg);
            const SolveResult sol = solve_milp(enc.model, {});
            const DecodedSolution dec = decode(enc, ts, tasks, sol);
            const auto best = oracle::best_path_bruteforce(
                ts, tasks, ecfg.horizon, ecfg.variant, matched_eval_options(ecfg));
            if (std::abs(dec.objective - best.objective) > 1e-9) ++bad;
        });
        failures += bad.load();
        std::cout << (bad.load() == 0 ? "PASS" : "FAIL") << " MILP vs path enumeration ("
                  << cfg.oracle_cases << " instances)\n";
    }

    // occupancy LP vs expectimax
    {
        std::atomic<int> bad{0};
        parallel_for(static_cast<std::size_t>(cfg.oracle_mdp_cases), [&](std::size_t i) {
            Rng rng(cfg.seed * 15485863 + i);
            MdpGenOptions mopts;
            mopts.num_states = rng.uniform_int(2, 3);
            mopts.horizon = rng.uniform_int(4, 6);
            const LabeledMdp mdp = random_mdp(rng, mopts);
            TaskSet tasks;
            const std::vector<std::string> atoms(mdp.atoms().begin(), mdp.atoms().end());
            FormulaGenOptions fopts;
            fopts.max_depth = 2;
            fopts.max_interval = 3;
            tasks.tasks.push_back(
                {random_formula(rng, atoms.empty() ? std::vector<std::string>{"a"} : atoms, fopts),
                 static_cast<double>(rng.uniform_int(1, 3))});
            RewardOptions ropts{RobustnessVariant::Right, 2, UntilSemantics::ExcludeEnd};
            const FullHorizonPlan plan =
                plan_full_horizon(mdp, tasks, mopts.horizon, ropts);
            const double em = oracle::expectimax_mdp(mdp, tasks, mopts.horizon,
                                                     ropts.variant, ropts);
            if (std::abs(plan.value - em) > 1e-6) ++bad;
        });
        failures += bad.load();
        std::cout << (bad.load() == 0 ? "PASS" : "FAIL") << " occupancy LP vs expectimax ("
                  << cfg.oracle_mdp_cases << " instances)\n";
    }

    return failures == 0 ? 0 : 1;
}

} // namespace

int run(const RunConfig& cfg) {
    try {
        fs::create_directories(cfg.out_dir);
        switch (cfg.mode) {
        case RunMode::PlanVwts: return run_plan_vwts(cfg);
        case RunMode::PlanMdp: return run_plan_mdp(cfg);
        case RunMode::PlanReceding: return run_plan_receding(cfg);
        case RunMode::Simulate: return run_simulate(cfg);
        case RunMode::Bench: return run_bench(cfg);
        case RunMode::OracleCheck: return run_oracle_check(cfg);
        }
        std::cerr << "unknown mode\n";
        return 1;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int render_plot(const std::string& csv_path, const std::string& svg_path) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "cannot open '" << csv_path << "'\n";
        return 1;
    }
    std::vector<BenchRow> rows;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BenchRow r;
        std::size_t pos = 0;
        auto field = [&]() {
            const std::size_t comma = line.find(',', pos);
            std::string f = line.substr(pos, comma - pos);
            pos = comma == std::string::npos ? line.size() : comma + 1;
            return f;
        };
        r.model = field();
        r.states = std::stoi(field());
        r.tasks = std::stoi(field());
        r.horizon = std::stoi(field());
        const std::string rec = field();
        r.receding = rec.empty() ? 0 : std::stoi(rec);
        r.t_encoding = std::stod(field());
        const std::string solving = field();
        r.t_solving = solving.empty() ? -1.0 : std::stod(solving);
        r.lpvars = std::stoi(field());
        r.lpconst = std::stoi(field());
        rows.push_back(std::move(r));
    }
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write '" << svg_path << "'\n";
        return 1;
    }
    write_bench_svg(rows, out);
    std::cout << svg_path << "\n";
    return 0;
}

} // namespace trp
