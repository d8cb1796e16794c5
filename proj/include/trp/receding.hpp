#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "trp/encoding.hpp"
#include "trp/mdp.hpp"
#include "trp/occupancy.hpp"
#include "trp/vwts.hpp"

namespace trp {

// ── Receding-horizon planning with a worst-case lookahead ────────────────────
//
// The worst-case VWTS takes, per edge and departure time, the largest delay
// in the MDP's support.  Pinning a realized trace makes it the only feasible
// prefix before the receding boundary; the Problem-1 optimum on the pinned
// system is the worst-case completion reward attached to frontier histories
// in the occupancy LP.  The LP objective is then a lower bound on the
// robustness achievable under any future replanning.

/// Worst-case VWTS of an MDP: support-maximal delays, arrivals clamped at the
/// horizon.  Edges whose schedule leaves some time uncovered must carry a
/// default outcome in the MDP file.
Vwts worst_case_vwts(const LabeledMdp& mdp, int horizon);

/// Applies the pinning rules to a realized trace: realized delays on the
/// prefix, horizon-exceeding weight (T+1, infeasible) off-prefix before the
/// boundary, worst-case weights from the boundary on.  A transition departing
/// before the boundary keeps its realized duration even when it arrives
/// after it.
Vwts pin_prefix(const Vwts& worst, const std::vector<std::pair<int, int>>& trace,
                int boundary, int horizon);

struct RecedingConfig {
    int horizon = 0;          // T
    int receding = 0;         // T_r
    int robustness_window = 0; // T'
    RobustnessVariant variant = RobustnessVariant::Right;
    UntilSemantics until = UntilSemantics::ExcludeEnd;
    UnrollLimits limits;
    SolveOptions solver;
    int workers = 1; // parallel reward MILPs

    RewardOptions reward_options() const {
        return {variant, robustness_window, until};
    }
    EncodingConfig encoding_config() const {
        return {horizon, robustness_window, variant, until, false};
    }
};

/// Memoizes pinned-MILP rewards across replannings and executions.
class RewardCache {
public:
    bool lookup(const std::string& key, double* value) const;
    void store(const std::string& key, double value);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, double> map_;
};

/// R-bar: Problem-1 optimum on the pinned worst-case system, horizon T.
/// Fully realized traces (last time = T) evaluate directly.  An infeasible
/// pinned model yields the most-negative representable weighted robustness.
double worst_case_reward(const TaskSet& tasks, const std::vector<std::pair<int, int>>& trace,
                         const Vwts& worst, int boundary, const RecedingConfig& cfg,
                         RewardCache* cache = nullptr);

struct RecedingPlan {
    HistoryTree tree;
    OccupancyLp lp;
    SolveResult solution;
    Strategy strategy;
    double bound = 0.0;  // LP objective: certified lower bound
    int reward_milps = 0; // pinned MILPs solved (cache misses)
    double encode_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Plans from a realized prefix up to the absolute time boundary, attaching
/// worst-case completion rewards to the frontier.
RecedingPlan plan_receding(const LabeledMdp& mdp, const TaskSet& tasks,
                           const RecedingConfig& cfg, int boundary,
                           std::vector<std::pair<int, int>> prefix = {},
                           RewardCache* cache = nullptr);

struct ReplanRecord {
    int replanning = 0; // 0 = initial plan
    int boundary = 0;
    std::string pinned_trace;
    double bound = 0.0;
    double wall_seconds = 0.0;
};

struct TraceStep {
    int state = 0;
    int time = 0;
    bool clamped = false;
};

struct ExecutionResult {
    std::vector<TraceStep> trace;
    double realized = 0.0;            // weighted robustness of the full trace
    std::vector<double> bounds;        // one per replanning
    std::vector<ReplanRecord> log;
};

/// Samples execution under receding-horizon replanning: plan to the next
/// boundary, walk the strategy, replan from the realized trace.
ExecutionResult execute_with_replanning(const LabeledMdp& mdp, const TaskSet& tasks,
                                        const RecedingConfig& cfg, std::uint64_t seed,
                                        RewardCache* cache = nullptr);

/// Weighted robustness of a realized full-horizon trace.
double trace_reward(const TaskSet& tasks, const LabeledMdp& mdp,
                    const std::vector<std::pair<int, int>>& trace, int horizon,
                    const RewardOptions& opts);

} // namespace trp
