#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trp/encoding.hpp"
#include "trp/receding.hpp"

namespace trp {

// ── Scaling benchmarks ───────────────────────────────────────────────────────
//
// Sweeps build office-like instances per grid cell, record model sizes and
// encode/solve times, and emit CSV.  Wall-clock columns are informational;
// size columns are deterministic per seed.

struct BenchRow {
    std::string model;  // "vwts" or "mdp"
    int states = 0;
    int tasks = 0;
    int horizon = 0;
    int receding = 0;       // 0 for vwts rows
    double t_encoding = 0.0;
    double t_solving = 0.0; // < 0 when the solve was skipped
    int lpvars = 0;
    int lpconst = 0;
};

struct VwtsBenchParams {
    std::vector<int> states{10, 46};
    std::vector<int> tasks{2, 5};
    std::vector<int> horizons{25, 50, 100};
    int robustness_window = 2;
    std::uint64_t seed = 1;
    double solve_limit_s = 0.0; // 0: encode only
    int workers = 1;
};

std::vector<BenchRow> bench_vwts(const VwtsBenchParams& params);

struct MdpBenchParams {
    int states = 3;
    std::vector<int> tasks{2};
    std::vector<int> horizons{25};
    std::vector<int> recedings{5, 7};
    int robustness_window = 2;
    std::uint64_t seed = 1;
    int workers = 1;
    double milp_time_limit_s = 60.0;
};

std::vector<BenchRow> bench_mdp(const MdpBenchParams& params);

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

/// Minimal SVG scaling plot: lpvars (solid) and lpconst (dashed) against the
/// horizon, one series per (model, states, tasks) group.
void write_bench_svg(const std::vector<BenchRow>& rows, std::ostream& out);

} // namespace trp
