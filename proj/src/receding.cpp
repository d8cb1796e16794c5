#include "trp/receding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "trp/parallel.hpp"
#include "trp/rng.hpp"

namespace trp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<WeightWindow> compress(const std::vector<std::pair<int, int>>& weights_by_t) {
    // input: (t, weight) sorted by t, contiguous; output: merged windows
    std::vector<WeightWindow> out;
    for (const auto& [t, w] : weights_by_t) {
        if (!out.empty() && out.back().weight == w && out.back().to_t == t - 1)
            out.back().to_t = t;
        else
            out.push_back({t, t, w});
    }
    return out;
}

} // namespace

Vwts worst_case_vwts(const LabeledMdp& mdp, int horizon) {
    if (horizon <= 0) throw ModelError("horizon must be positive");
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels;
    for (int s = 0; s < mdp.num_states(); ++s) {
        names.push_back(mdp.state_name(s));
        labels.push_back(mdp.labels(s));
    }
    Vwts worst(std::move(names), std::move(labels), mdp.initial());

    for (const auto& edge : mdp.edges()) {
        std::vector<std::pair<int, int>> weights;
        for (int t = 0; t < horizon; ++t) {
            const std::vector<DelayOutcome>* out = mdp.outcomes(edge.from, t, edge.to);
            if (!out) {
                if (edge.default_outcomes.empty())
                    throw ModelError("edge " + mdp.state_name(edge.from) + "->" +
                                     mdp.state_name(edge.to) + " has no support at t=" +
                                     std::to_string(t) +
                                     " and no default outcomes are authored");
                out = &edge.default_outcomes;
            }
            int w = 1;
            for (const auto& o : *out) w = std::max(w, std::min(t + o.dt, horizon) - t);
            weights.push_back({t, w});
        }
        Vwts::EdgeSchedule sched;
        sched.windows = compress(weights);
        worst.add_edge(edge.from, edge.to, std::move(sched));
    }
    return worst;
}

Vwts pin_prefix(const Vwts& worst, const std::vector<std::pair<int, int>>& trace,
                int boundary, int horizon) {
    if (trace.empty()) throw ModelError("pin_prefix: empty trace");
    if (trace.front() != std::make_pair(worst.initial(), 0))
        throw ModelError("pin_prefix: trace does not start at the initial state");
    const int infeasible = horizon + 1;

    // realized transitions keyed by (from, depart, to)
    struct Realized {
        int from, depart, to, duration;
    };
    std::vector<Realized> realized;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const auto [s1, t1] = trace[i - 1];
        const auto [s2, t2] = trace[i];
        if (t2 <= t1) throw ModelError("pin_prefix: trace times must increase");
        if (t1 >= boundary)
            throw ModelError("pin_prefix: trace transition departs at t=" +
                             std::to_string(t1) + " past the boundary " +
                             std::to_string(boundary));
        if (!worst.has_edge(s1, s2))
            throw ModelError("pin_prefix: trace uses edge absent from the worst-case system");
        realized.push_back({s1, t1, s2, t2 - t1});
    }

    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels;
    for (int s = 0; s < worst.num_states(); ++s) {
        names.push_back(worst.state_name(s));
        labels.push_back(worst.labels(s));
    }
    Vwts pinned(std::move(names), std::move(labels), worst.initial());

    const int cap = std::min(boundary, horizon);
    for (int s1 = 0; s1 < worst.num_states(); ++s1)
        for (int s2 = 0; s2 < worst.num_states(); ++s2) {
            if (!worst.has_edge(s1, s2)) continue;
            std::vector<std::pair<int, int>> weights;
            for (int t = 0; t < cap; ++t) {
                int w = infeasible; // rule 2: off-prefix moves cannot happen
                for (const auto& r : realized)
                    if (r.from == s1 && r.depart == t && r.to == s2) w = r.duration;
                weights.push_back({t, w});
            }
            for (int t = cap; t <= horizon; ++t)
                weights.push_back({t, worst.delta(s1, t, s2)}); // rule 3
            Vwts::EdgeSchedule sched;
            sched.windows = compress(weights);
            pinned.add_edge(s1, s2, std::move(sched));
        }
    return pinned;
}

bool RewardCache::lookup(const std::string& key, double* value) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    *value = it->second;
    return true;
}

void RewardCache::store(const std::string& key, double value) {
    std::lock_guard<std::mutex> lock(mu_);
    map_[key] = value;
}

std::size_t RewardCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

double trace_reward(const TaskSet& tasks, const LabeledMdp& mdp,
                    const std::vector<std::pair<int, int>>& trace, int horizon,
                    const RewardOptions& opts) {
    std::vector<TimedWord::Entry> entries;
    for (const auto& [s, t] : trace) entries.push_back({mdp.labels(s), t});
    const TimedWord w = TimedWord::from_entries(std::move(entries));
    const EvalOptions eval = reward_eval_options(opts, horizon);
    double total = 0.0;
    for (const auto& task : tasks.tasks)
        total += task.priority * robustness(task.formula, w, 0, opts.variant, eval);
    return total;
}

namespace {

std::string pin_key(const std::vector<std::pair<int, int>>& trace, int boundary) {
    std::string key = "B" + std::to_string(boundary) + "|";
    for (const auto& [s, t] : trace)
        key += std::to_string(s) + "@" + std::to_string(t) + ">";
    return key;
}

} // namespace

double worst_case_reward(const TaskSet& tasks, const std::vector<std::pair<int, int>>& trace,
                         const Vwts& worst, int boundary, const RecedingConfig& cfg,
                         RewardCache* cache) {
    if (trace.empty()) throw ModelError("worst_case_reward: empty trace");
    const std::string key = pin_key(trace, boundary);
    double cached = 0.0;
    if (cache && cache->lookup(key, &cached)) return cached;

    double value = 0.0;
    if (trace.back().second >= cfg.horizon) {
        // fully realized: nothing left to plan, the reward is exact
        std::vector<TimedWord::Entry> entries;
        for (const auto& [s, t] : trace) entries.push_back({worst.labels(s), t});
        const TimedWord w = TimedWord::from_entries(std::move(entries));
        const EvalOptions eval = reward_eval_options(cfg.reward_options(), cfg.horizon);
        for (const auto& task : tasks.tasks)
            value += task.priority * robustness(task.formula, w, 0, cfg.variant, eval);
    } else {
        const Vwts pinned = pin_prefix(worst, trace, boundary, cfg.horizon);
        const Problem1 enc = build_problem1(pinned, tasks, cfg.encoding_config());
        const SolveResult sol = solve_milp(enc.model, cfg.solver);
        if (sol.status == SolveStatus::Optimal) {
            value = decode(enc, pinned, tasks, sol).objective;
        } else if (sol.status == SolveStatus::Infeasible) {
            double mass = 0.0;
            for (const auto& task : tasks.tasks) mass += task.priority;
            value = -(cfg.robustness_window + 1) * mass;
        } else {
            throw ModelError(std::string("worst-case reward MILP: ") +
                             status_name(sol.status));
        }
    }
    if (cache) cache->store(key, value);
    return value;
}

RecedingPlan plan_receding(const LabeledMdp& mdp, const TaskSet& tasks,
                           const RecedingConfig& cfg, int boundary,
                           std::vector<std::pair<int, int>> prefix, RewardCache* cache) {
    if (cfg.receding <= 0 || cfg.receding > cfg.horizon)
        throw ModelError("receding horizon must lie in [1, T]");
    if (cfg.variant != RobustnessVariant::Right)
        throw ModelError("receding-horizon planning is built for right robustness");
    const auto t0 = Clock::now();
    RecedingPlan plan;
    plan.tree = HistoryTree::unroll(mdp, cfg.horizon, boundary, cfg.limits, std::move(prefix));

    const Vwts worst = worst_case_vwts(mdp, cfg.horizon);
    std::vector<double> rewards(static_cast<std::size_t>(plan.tree.size()), 0.0);
    std::vector<int> frontier;
    for (int id = 0; id < plan.tree.size(); ++id)
        if (plan.tree.absorbed(id)) frontier.push_back(id);

    std::atomic<int> misses{0};
    parallel_for(
        frontier.size(),
        [&](std::size_t i) {
            const int id = frontier[i];
            const auto trace = plan.tree.trace(id);
            const std::string key = pin_key(trace, boundary);
            double v = 0.0;
            if (!cache || !cache->lookup(key, &v)) {
                ++misses;
                v = worst_case_reward(tasks, trace, worst, boundary, cfg, cache);
            }
            rewards[static_cast<std::size_t>(id)] = v;
        },
        cfg.workers);
    plan.reward_milps = misses.load();
    plan.encode_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    plan.lp = build_occupancy_lp(plan.tree, rewards);
    plan.solution = solve_lp(plan.lp.model, true, cfg.solver);
    if (plan.solution.status != SolveStatus::Optimal)
        throw ModelError(std::string("occupancy LP: ") + status_name(plan.solution.status));
    plan.strategy = extract_strategy(plan.tree, plan.lp, plan.solution);
    plan.bound = plan.solution.objective;
    plan.solve_seconds = seconds_since(t1);
    return plan;
}

ExecutionResult execute_with_replanning(const LabeledMdp& mdp, const TaskSet& tasks,
                                        const RecedingConfig& cfg, std::uint64_t seed,
                                        RewardCache* cache) {
    ExecutionResult result;
    Rng rng(seed);
    std::vector<std::pair<int, int>> trace{{mdp.initial(), 0}};
    std::vector<bool> clamp_flags{false};

    int replanning = 0;
    while (trace.back().second < cfg.horizon) {
        const int current = trace.back().second;
        int boundary = std::min(cfg.horizon, cfg.receding * (replanning + 1));
        while (boundary <= current) {
            ++replanning;
            boundary = std::min(cfg.horizon, cfg.receding * (replanning + 1));
        }
        const auto t0 = Clock::now();
        RecedingPlan plan = plan_receding(mdp, tasks, cfg, boundary, trace, cache);
        result.bounds.push_back(plan.bound);
        result.log.push_back({replanning, boundary, pin_key(trace, boundary), plan.bound,
                              seconds_since(t0)});

        // walk the sampled strategy until the plan's frontier
        int node = 0;
        while (!plan.tree.absorbed(node)) {
            const auto& dist = plan.strategy.choice[node];
            std::vector<int> targets;
            std::vector<double> probs;
            for (const auto& [target, p] : dist) {
                targets.push_back(target);
                probs.push_back(p);
            }
            const int target = targets[rng.pick_weighted(probs)];
            std::vector<int> kids;
            std::vector<double> kid_probs;
            for (int child : plan.tree.node(node).children)
                if (plan.tree.node(child).action_from_parent == target) {
                    kids.push_back(child);
                    kid_probs.push_back(plan.tree.child_prob(child));
                }
            if (kids.empty()) throw ModelError("sampled action has no outcomes in the tree");
            node = kids[rng.pick_weighted(kid_probs)];
            trace.push_back({plan.tree.node(node).state, plan.tree.node(node).time});
            clamp_flags.push_back(plan.tree.node(node).clamped);
        }
        ++replanning;
    }

    result.trace.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        result.trace.push_back({trace[i].first, trace[i].second, clamp_flags[i]});
    result.realized = trace_reward(tasks, mdp, trace, cfg.horizon, cfg.reward_options());
    return result;
}

} // namespace trp
