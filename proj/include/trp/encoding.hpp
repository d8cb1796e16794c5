#pragma once

#include <map>
#include <vector>

#include "trp/milp.hpp"
#include "trp/semantics.hpp"
#include "trp/solver.hpp"
#include "trp/vwts.hpp"

namespace trp {

// ── MILP encoding of maximum-robustness path planning ────────────────────────
//
// Translates (Vwts, TaskSet, horizons, variant) into a MILP whose optimum is
// a priority-weighted maximum-robustness path, and decodes solver output back
// into paths, words, and per-task robustness values.
//
// Occupancy layer: binaries b_s^t say state s is occupied at time t, with
// unit edge-flow binaries tying every occupancy after t = 0 to the move that
// caused it.  The flow linkage closes two gaps in the bare occupancy
// constraints: without it the model admits spontaneous ("ghost") occupancies
// that fake labels, and the blanket one-successor bound cuts valid paths
// whose later states coincide with unused successor slots.
//
// Label layer: satisfaction binaries z carry the last visited state's labels
// through unoccupied times (the persistence semantics of timed words), via a
// carry recurrence instead of a quadratic selector grid, keeping model growth
// linear in the horizon.
//
// Robustness layer: streak counters over z with big-M linearized products;
// right robustness runs over fictive negative times [-T', 0] where no state
// variable is occupied, left robustness anchors at the horizon.

struct EncodingConfig {
    int horizon = 0;           // T: plan times range over [0, T]
    int robustness_window = 0; // T': right-robustness lookback depth
    RobustnessVariant variant = RobustnessVariant::Right;
    UntilSemantics until = UntilSemantics::ExcludeEnd;
    /// Also emit the paper-style blanket one-successor row per (state, time).
    /// Off by default: it can exclude valid paths (see module notes).
    bool legacy_transition_bound = false;

    int big_m() const { return horizon + robustness_window + 1; }
    void validate(const TaskSet& tasks) const;
};

/// Handles into the occupancy layer.
struct TsHandles {
    int num_states = 0;
    int horizon = 0;
    std::vector<int> b;                      // (s, t) -> var id
    std::vector<std::vector<LinTerm>> occ;   // per t: terms of sum_s b_s^t

    int b_var(int s, int t) const { return b.at(static_cast<std::size_t>(s) * (horizon + 1) + t); }
    LinExpr occ_expr(int t) const;
};

/// Handles into the idle-time counters q^t (steps since last occupancy) and
/// q~^t = t - q^t (index of the last occupied time).
struct TrackingHandles {
    std::vector<int> q;
    std::vector<int> q_tilde;
};

/// Satisfaction variables z for one formula: one binary per subformula and
/// time point in [-T', T], indexed by post-order subformula position.
struct MitlHandles {
    int t_lo = 0; // -T'
    int t_hi = 0; // T
    std::vector<const FormulaNode*> nodes; // post-order, root last
    std::vector<std::vector<int>> z;       // per node, per time offset

    int z_var(std::size_t node, int t) const {
        return z.at(node).at(static_cast<std::size_t>(t - t_lo));
    }
    int root_z(int t) const { return z_var(z.size() - 1, t); }
};

TsHandles encode_ts(const Vwts& ts, const EncodingConfig& cfg, MilpModel& model);

TrackingHandles encode_label_tracking(MilpModel& model, const TsHandles& ts,
                                      const EncodingConfig& cfg);

MitlHandles encode_mitl(MilpModel& model, const Formula& formula, const Vwts& ts,
                        const TsHandles& tsh, const TrackingHandles& tracking,
                        const EncodingConfig& cfg);

/// Streak-counter chain over the root z on [-T', 0]; returns the eta^- var.
int encode_right_robustness(MilpModel& model, const MitlHandles& mitl,
                            const EncodingConfig& cfg);

/// Mirrored chain over [0, T] anchored at the horizon; returns the eta^+ var.
int encode_left_robustness(MilpModel& model, const MitlHandles& mitl,
                           const EncodingConfig& cfg);

struct Problem1 {
    MilpModel model;
    TsHandles ts;
    TrackingHandles tracking;
    std::vector<MitlHandles> tasks;
    std::vector<int> eta; // per task
    EncodingConfig cfg;
};

/// Full Problem 1 model with objective sum_i priority_i * eta_i.
/// The Combined variant has no MILP encoding and is rejected.
Problem1 build_problem1(const Vwts& ts, const TaskSet& tasks, const EncodingConfig& cfg);

struct DecodedSolution {
    Path path;
    TimeSequence times;
    TimedWord word;
    std::vector<int> task_robustness;
    double objective = 0.0; // recomputed exactly from task robustness
};

/// Reads the occupancy out of a solution, replays it as a path, and verifies
/// that direct evaluation on the decoded word reproduces every eta handle.
DecodedSolution decode(const Problem1& enc, const Vwts& ts, const TaskSet& tasks,
                       const SolveResult& sol);

/// Evaluation options matching the conventions the MILP encodes: truncated
/// windows, persistence up to the horizon, fictive negative padding under
/// the Right variant.
EvalOptions matched_eval_options(const EncodingConfig& cfg);

/// Fixes the occupancy variables to a concrete path (testing/pinning aid).
void pin_path(MilpModel& model, const TsHandles& tsh, const Vwts& ts, const Path& path,
              int horizon);

} // namespace trp
