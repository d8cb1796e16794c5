#pragma once

#include "trp/formula.hpp"
#include "trp/mdp.hpp"
#include "trp/semantics.hpp"
#include "trp/timed_word.hpp"
#include "trp/vwts.hpp"

namespace trp {
namespace oracle {

// ── Brute-force ground truth ─────────────────────────────────────────────────
//
// Everything here re-derives satisfaction and robustness from the defining
// equations by literal recursion and enumeration, sharing only data types
// with the optimizers.  Slow on purpose: these functions exist to be trusted
// in differential tests, not to scale.

struct Budget {
    long long max_paths = 20'000'000;
    long long max_history_nodes = 20'000'000;
    double max_seconds = 600.0;
};

/// Literal recursive evaluation of the characteristic function.
int char_value(const Formula& f, const TimedWord& w, int t, const EvalOptions& opts = {});

/// Literal tau = 0, 1, 2, ... enumeration checking chi constancy.
int shift_scan_robustness(const Formula& f, const TimedWord& w, int t,
                          RobustnessVariant variant, const EvalOptions& opts = {});

/// Weighted objective at t = 0 via the oracle evaluator.
double weighted(const TaskSet& tasks, const TimedWord& w, RobustnessVariant variant,
                const EvalOptions& opts = {});

struct BestPath {
    Path path;
    double objective = 0.0;
    long long paths_enumerated = 0;
};

/// Exhaustive enumeration of maximal feasible paths (a move must be taken
/// while one fits inside the horizon), argmax of the weighted robustness with
/// lexicographic tie-breaking on the state-id sequence.  Evaluation options
/// must match the conventions of the optimizer under test.
BestPath best_path_bruteforce(const Vwts& ts, const TaskSet& tasks, int horizon,
                              RobustnessVariant variant, const EvalOptions& opts,
                              const Budget& budget = {});

/// Backward-induction expectimax over the history tree: leaves take the
/// weighted robustness of their trace, chance nodes average, decision nodes
/// maximize over enabled actions.
double expectimax_mdp(const LabeledMdp& mdp, const TaskSet& tasks, int horizon,
                      RobustnessVariant variant, const RewardOptions& reward_opts,
                      const Budget& budget = {});

} // namespace oracle
} // namespace trp
