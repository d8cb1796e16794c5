#pragma once

#include <vector>

#include "trp/milp.hpp"

namespace trp {

// ── Reference exact optimizer ────────────────────────────────────────────────
//
// solve_lp: primal revised simplex over bounded variables with an explicit
// dense basis inverse, deterministic pivoting (Dantzig pricing, Bland's rule
// under degeneracy), and a final refactorized feasibility verification.
//
// solve_milp: best-bound branch and bound on fractional integrals over the
// LP core.  Built for desk-scale exactness, not competitive performance.

enum class SolveStatus : std::uint8_t {
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
    NumericFailure,
};

const char* status_name(SolveStatus s) noexcept;

struct SolveOptions {
    double time_limit_s = kInf;
    double feas_tol = 1e-9;  // constraint replay tolerance
    double opt_tol = 1e-9;   // reduced-cost tolerance
    double int_tol = 1e-6;   // integrality tolerance
    long long max_nodes = 50'000'000;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NumericFailure;
    double objective = 0.0;
    /// Upper bound on the optimum (maximization); equals objective when
    /// Optimal, sandwiches the incumbent on TimeLimit.
    double bound = 0.0;
    std::vector<double> assignment; // one value per model variable
    long long nodes = 0;            // branch-and-bound nodes beyond the root
    long long iterations = 0;       // simplex iterations, all solves
    double wall_seconds = 0.0;
    bool has_assignment() const { return !assignment.empty(); }
};

/// Solves the LP relaxation (relax_integrality = true) or requires a pure LP.
SolveResult solve_lp(const MilpModel& m, bool relax_integrality = true,
                     const SolveOptions& opts = {});

/// Exact MILP optimum by branch and bound; TimeLimit returns the incumbent
/// and the best open bound.
SolveResult solve_milp(const MilpModel& m, const SolveOptions& opts = {});

} // namespace trp
