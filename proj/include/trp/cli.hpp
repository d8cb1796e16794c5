#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trp/formula.hpp"

namespace trp {

// ── Command-line front end ───────────────────────────────────────────────────
//
// run() dispatches one planning/simulation/benchmark invocation and writes
// its artifacts under the output directory.  Artifacts are deterministic for
// a fixed config and seed; timing-bearing logs are not part of that contract.

enum class RunMode {
    PlanVwts,
    PlanMdp,
    PlanReceding,
    Simulate,
    Bench,
    OracleCheck,
};

struct RunConfig {
    RunMode mode = RunMode::PlanVwts;
    std::string env_path;
    std::string mdp_path;
    std::string tasks_path;
    int horizon = 0;
    int receding = 0;         // T_r; Simulate without it rolls a full-horizon plan
    int robustness_window = 2; // T'
    RobustnessVariant variant = RobustnessVariant::Right;
    bool until_closed = false; // IncludeEnd Until semantics
    std::uint64_t seed = 0;
    double time_limit_s = 600.0;
    std::string out_dir = ".";
    bool emit_mps = false;
    int runs = 1; // Simulate: number of seeded executions

    // bench grids
    std::vector<int> bench_states{10, 46};
    std::vector<int> bench_tasks{2, 5};
    std::vector<int> bench_horizons{25, 50, 100};
    std::vector<int> bench_recedings{5, 7};
    double bench_solve_limit_s = 0.0;
    bool bench_mdp_part = true;

    // oracle-check caps
    int oracle_cases = 25;
    int oracle_word_cases = 300;
    int oracle_mdp_cases = 6;
};

/// Exit code: 0 ok, 1 parse/config error, 2 infeasible, 3 resource/time
/// limit.  Messages go to stderr; artifact paths print to stdout.
int run(const RunConfig& cfg);

/// Renders a bench CSV into an SVG scaling plot (the `plot` subcommand).
int render_plot(const std::string& csv_path, const std::string& svg_path);

} // namespace trp
