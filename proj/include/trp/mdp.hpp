#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trp/errors.hpp"
#include "trp/semantics.hpp"
#include "trp/timed_word.hpp"

#include <nlohmann/json_fwd.hpp>

namespace trp {

// ── Labeled MDP with stochastic time-dependent durations ─────────────────────
//
// Actions traverse edges; executing the edge (s, s2) at time t lands in s2
// after a random delay drawn from the (edge, time)-dependent outcome
// distribution.  Every state can wait: a file-authored self-edge wins,
// otherwise a unit-delay self-transition is synthesized.  Arrivals beyond the
// planning horizon clamp to it.

struct DelayOutcome {
    int dt = 1;       // duration, >= 1
    double prob = 0.0;
};

struct DelayWindow {
    int from_t = 0;
    int to_t = 0; // inclusive
    std::vector<DelayOutcome> outcomes;
};

class LabeledMdp {
public:
    struct Edge {
        int from = -1;
        int to = -1;
        std::vector<DelayWindow> windows;
        std::vector<DelayOutcome> default_outcomes; // used for uncovered times
    };

    LabeledMdp(std::vector<std::string> state_names,
               std::vector<std::set<std::string>> labels, int initial);

    int num_states() const { return static_cast<int>(names_.size()); }
    int initial() const { return initial_; }
    int state_id(const std::string& name) const;
    const std::string& state_name(int s) const { return names_.at(s); }
    const std::set<std::string>& labels(int s) const { return labels_.at(s); }
    const std::set<std::string>& atoms() const { return atoms_; }

    void add_edge(Edge edge);
    const std::vector<Edge>& edges() const { return edges_; }

    /// Outcome distribution for departing s toward s2 at time t, or nullptr
    /// when the move is unsupported then.  The synthesized wait is not
    /// reported here; see enabled_actions.
    const std::vector<DelayOutcome>* outcomes(int s, int t, int s2) const;

    /// Targets of all actions enabled at (s, t): supported edges plus the
    /// wait self-target, sorted by state id.
    std::vector<int> enabled_actions(int s, int t) const;

    /// Outcomes of the action moving toward target from (s, t), including the
    /// synthesized unit wait when no self-edge covers t.
    std::vector<DelayOutcome> action_outcomes(int s, int t, int target) const;

    static LabeledMdp from_json(const nlohmann::json& j);
    static LabeledMdp load_file(const std::string& path);

private:
    std::vector<std::string> names_;
    std::vector<std::set<std::string>> labels_;
    std::set<std::string> atoms_;
    int initial_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> edge_index_; // [from][to] -> edge id or -1
};

// ── History tree ─────────────────────────────────────────────────────────────
//
// Interned prefix tree of reachable traces.  A node is one history: the
// (state, arrival-time) pair plus its parent chain.  Expansion stops at the
// absorbing boundary: histories whose time reaches it become leaves carrying
// terminal rewards.

struct HistoryNode {
    int parent = -1;
    int state = 0;
    int time = 0;
    int depth = 0;        // transitions taken so far
    bool clamped = false; // arrival clamped to the horizon
    int action_from_parent = -1; // target state of the generating action
    std::vector<int> children;
};

struct UnrollLimits {
    std::size_t max_nodes = 500'000;
};

class HistoryTree {
public:
    /// Expands reachable histories of the MDP until every branch reaches
    /// time >= boundary (absorbed) with boundary <= horizon; arrivals clamp
    /// at the horizon.  The tree roots at the last element of `prefix` (the
    /// realized trace so far); earlier elements only extend reported traces
    /// and words.
    static HistoryTree unroll(const LabeledMdp& mdp, int horizon, int boundary,
                              const UnrollLimits& limits = {},
                              std::vector<std::pair<int, int>> prefix = {});

    const LabeledMdp& mdp() const { return *mdp_; }
    int horizon() const { return horizon_; }
    int boundary() const { return boundary_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const HistoryNode& node(int id) const { return nodes_.at(id); }
    bool absorbed(int id) const { return nodes_.at(id).time >= boundary_; }

    /// Trace from the root to the node, as (state, time) pairs.
    std::vector<std::pair<int, int>> trace(int id) const;
    /// Timed word of the node's trace.
    TimedWord word(int id) const;
    std::string trace_key(int id) const;

    /// Probability of the transition from node `parent` to child, given the
    /// generating action (outcome probabilities merged per arrival).
    double child_prob(int child) const { return child_prob_.at(child); }

    std::vector<int> leaves() const;

    const std::vector<std::pair<int, int>>& prefix() const { return prefix_; }

private:
    const LabeledMdp* mdp_ = nullptr;
    int horizon_ = 0;
    int boundary_ = 0;
    std::vector<std::pair<int, int>> prefix_; // realized trace before the root
    std::vector<HistoryNode> nodes_;
    std::vector<double> child_prob_;
};

/// Per-planning-step reachable history sets: step h holds every history with
/// h transitions, with absorbed histories persisting through later steps.
std::vector<std::vector<int>> reachable_histories(const HistoryTree& tree, int steps);

struct RewardOptions {
    RobustnessVariant variant = RobustnessVariant::Right;
    int robustness_window = 0; // T' for the Right variant
    UntilSemantics until = UntilSemantics::ExcludeEnd;
};

/// R~: priority-weighted robustness of the history's word when its last time
/// equals the horizon, else 0.
double terminal_reward(const TaskSet& tasks, const HistoryTree& tree, int node,
                       const RewardOptions& opts);

EvalOptions reward_eval_options(const RewardOptions& opts, int horizon);

} // namespace trp
