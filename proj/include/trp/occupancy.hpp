#pragma once

#include <map>
#include <vector>

#include "trp/mdp.hpp"
#include "trp/milp.hpp"
#include "trp/rng.hpp"
#include "trp/solver.hpp"

namespace trp {

// ── Occupancy-measure LP over the history tree ───────────────────────────────
//
// One continuous variable per (interior history, enabled action); absorbed
// histories get a single retention variable standing for their mass at every
// later planning step (the per-step done-chain is an identity and is kept
// collapsed).  Flow conservation ties each history's action mass to the
// probability-weighted inflow from its parent; the root carries mass 1.
// The objective is the reward-weighted terminal mass.

struct OccupancyLp {
    MilpModel model; // pure LP
    // per tree node: map action target -> variable (interior nodes),
    // or the single retention variable (absorbed nodes, key -1)
    std::vector<std::map<int, int>> vars;
    std::vector<double> rewards; // per node; nonzero only on absorbed nodes

    int retention_var(int node) const { return vars.at(node).at(-1); }
};

OccupancyLp build_occupancy_lp(const HistoryTree& tree, std::vector<double> rewards);

/// History-dependent stochastic policy: per interior node a distribution over
/// enabled action targets.
struct Strategy {
    std::vector<std::map<int, double>> choice; // per node: target -> probability
};

/// mu(h, a) = o_{h,a} / sum_a' o_{h,a'}; zero-mass histories fall back to the
/// uniform distribution over enabled actions.
Strategy extract_strategy(const HistoryTree& tree, const OccupancyLp& lp,
                          const SolveResult& sol);

/// Occupancy measures implied by forward-propagating a strategy, in the same
/// variable layout as the LP (retention variables collect absorbed mass).
std::vector<double> propagate_occupancy(const HistoryTree& tree, const OccupancyLp& lp,
                                        const Strategy& strategy);

/// Exact expected terminal reward of a strategy by forward propagation.
double expected_value_exact(const HistoryTree& tree, const std::vector<double>& rewards,
                            const Strategy& strategy);

/// Expands the collapsed occupancy solution to the per-step view
/// o^h_{history, action}; step h lists pairs ((node, action-target), mass).
std::vector<std::vector<std::pair<std::pair<int, int>, double>>> occupancy_by_step(
    const HistoryTree& tree, const OccupancyLp& lp, const std::vector<double>& values,
    int steps);

/// Max residual of the flow-conservation rows under an assignment.
double flow_residual(const OccupancyLp& lp, const std::vector<double>& x);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int samples = 0;
};

/// Monte-Carlo estimate of a strategy's expected terminal reward.
McEstimate mc_value(const HistoryTree& tree, const std::vector<double>& rewards,
                    const Strategy& strategy, int samples, std::uint64_t seed);

/// Walks one rollout under the strategy; returns the absorbed node reached.
int sample_rollout(const HistoryTree& tree, const Strategy& strategy, Rng& rng);

/// Value of the strategy's memoryless projection: action distributions
/// averaged (visit-mass weighted) over histories sharing (state, time).
double memoryless_value(const HistoryTree& tree, const std::vector<double>& rewards,
                        const Strategy& strategy);

struct FullHorizonPlan {
    HistoryTree tree;
    OccupancyLp lp;
    SolveResult solution;
    Strategy strategy;
    double value = 0.0;
    double encode_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Problem 2 end to end: unroll histories to the horizon, attach terminal
/// rewards, solve the occupancy LP, extract the strategy.
FullHorizonPlan plan_full_horizon(const LabeledMdp& mdp, const TaskSet& tasks, int horizon,
                                  const RewardOptions& reward_opts,
                                  const UnrollLimits& limits = {},
                                  const SolveOptions& solver = {});

} // namespace trp
