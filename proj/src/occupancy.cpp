#include "trp/occupancy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace trp {

OccupancyLp build_occupancy_lp(const HistoryTree& tree, std::vector<double> rewards) {
    if (static_cast<int>(rewards.size()) != tree.size())
        throw ModelError("rewards/tree size mismatch");
    OccupancyLp lp;
    lp.model.name = "occupancy";
    lp.vars.resize(static_cast<std::size_t>(tree.size()));
    lp.rewards = std::move(rewards);

    for (int id = 0; id < tree.size(); ++id) {
        const auto& n = tree.node(id);
        if (tree.absorbed(id)) {
            const int v = lp.model.add_var("o_" + std::to_string(id) + "_stay",
                                           VarKind::Continuous, 0.0, 1.0);
            lp.vars[id][-1] = v;
            if (lp.rewards[id] != 0.0) lp.model.objective.add(v, lp.rewards[id]);
            continue;
        }
        for (int target : tree.mdp().enabled_actions(n.state, n.time)) {
            const int v = lp.model.add_var(
                "o_" + std::to_string(id) + "_a" + tree.mdp().state_name(target),
                VarKind::Continuous, 0.0, 1.0);
            lp.vars[id][target] = v;
        }
        if (lp.vars[id].empty())
            throw ModelError("interior history without enabled actions");
    }

    // root mass is 1; every other node's action mass equals its inflow
    for (int id = 0; id < tree.size(); ++id) {
        LinExpr flow;
        for (const auto& [target, var] : lp.vars[id]) flow.add(var, 1.0);
        if (id == 0) {
            lp.model.add_con("mass_root", flow, ConSense::Eq, 1.0);
            continue;
        }
        const auto& n = tree.node(id);
        const int parent_action_var = lp.vars[n.parent].count(n.action_from_parent)
                                          ? lp.vars[n.parent].at(n.action_from_parent)
                                          : -1;
        if (parent_action_var < 0) throw ModelError("child generated by unknown action");
        flow.add(parent_action_var, -tree.child_prob(id));
        lp.model.add_con("flow_" + std::to_string(id), flow, ConSense::Eq, 0.0);
    }
    lp.model.objective.normalize();
    return lp;
}

Strategy extract_strategy(const HistoryTree& tree, const OccupancyLp& lp,
                          const SolveResult& sol) {
    if (!sol.has_assignment()) throw ModelError("extract_strategy: no assignment");
    Strategy mu;
    mu.choice.resize(static_cast<std::size_t>(tree.size()));
    for (int id = 0; id < tree.size(); ++id) {
        if (tree.absorbed(id)) continue;
        double mass = 0.0;
        for (const auto& [target, var] : lp.vars[id])
            mass += sol.assignment.at(static_cast<std::size_t>(var));
        auto& dist = mu.choice[id];
        if (mass > 1e-12) {
            for (const auto& [target, var] : lp.vars[id])
                dist[target] =
                    std::max(0.0, sol.assignment.at(static_cast<std::size_t>(var))) / mass;
        } else {
            const double u = 1.0 / static_cast<double>(lp.vars[id].size());
            for (const auto& [target, var] : lp.vars[id]) dist[target] = u;
        }
    }
    return mu;
}

std::vector<double> propagate_occupancy(const HistoryTree& tree, const OccupancyLp& lp,
                                        const Strategy& strategy) {
    std::vector<double> x(lp.model.vars.size(), 0.0);
    std::vector<double> mass(static_cast<std::size_t>(tree.size()), 0.0);
    mass[0] = 1.0;
    for (int id = 0; id < tree.size(); ++id) {
        if (tree.absorbed(id)) {
            x[static_cast<std::size_t>(lp.retention_var(id))] = mass[id];
            continue;
        }
        for (const auto& [target, var] : lp.vars[id]) {
            const auto it = strategy.choice[id].find(target);
            const double p = it == strategy.choice[id].end() ? 0.0 : it->second;
            x[static_cast<std::size_t>(var)] = mass[id] * p;
        }
        for (int child : tree.node(id).children) {
            const auto& cn = tree.node(child);
            const auto it = strategy.choice[id].find(cn.action_from_parent);
            const double p = it == strategy.choice[id].end() ? 0.0 : it->second;
            mass[child] += mass[id] * p * tree.child_prob(child);
        }
    }
    return x;
}

double expected_value_exact(const HistoryTree& tree, const std::vector<double>& rewards,
                            const Strategy& strategy) {
    std::vector<double> mass(static_cast<std::size_t>(tree.size()), 0.0);
    mass[0] = 1.0;
    double value = 0.0;
    for (int id = 0; id < tree.size(); ++id) {
        if (tree.absorbed(id)) {
            value += mass[id] * rewards.at(static_cast<std::size_t>(id));
            continue;
        }
        for (int child : tree.node(id).children) {
            const auto& cn = tree.node(child);
            const auto it = strategy.choice[id].find(cn.action_from_parent);
            const double p = it == strategy.choice[id].end() ? 0.0 : it->second;
            mass[child] += mass[id] * p * tree.child_prob(child);
        }
    }
    return value;
}

std::vector<std::vector<std::pair<std::pair<int, int>, double>>> occupancy_by_step(
    const HistoryTree& tree, const OccupancyLp& lp, const std::vector<double>& values,
    int steps) {
    std::vector<std::vector<std::pair<std::pair<int, int>, double>>> out(
        static_cast<std::size_t>(steps) + 1);
    for (int id = 0; id < tree.size(); ++id) {
        const auto& n = tree.node(id);
        if (tree.absorbed(id)) {
            const double v = values.at(static_cast<std::size_t>(lp.retention_var(id)));
            for (int h = n.depth; h <= steps; ++h)
                out[static_cast<std::size_t>(h)].push_back({{id, -1}, v});
            continue;
        }
        if (n.depth <= steps)
            for (const auto& [target, var] : lp.vars[id])
                out[static_cast<std::size_t>(n.depth)].push_back(
                    {{id, target}, values.at(static_cast<std::size_t>(var))});
    }
    return out;
}

double flow_residual(const OccupancyLp& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& c : lp.model.cons) {
        const double lhs = eval_expr(c.expr, x);
        worst = std::max(worst, std::abs(lhs - c.rhs));
    }
    return worst;
}

int sample_rollout(const HistoryTree& tree, const Strategy& strategy, Rng& rng) {
    int node = 0;
    while (!tree.absorbed(node)) {
        const auto& dist = strategy.choice.at(static_cast<std::size_t>(node));
        std::vector<int> targets;
        std::vector<double> probs;
        for (const auto& [target, p] : dist) {
            targets.push_back(target);
            probs.push_back(p);
        }
        const int target = targets[rng.pick_weighted(probs)];
        std::vector<int> kids;
        std::vector<double> kid_probs;
        for (int child : tree.node(node).children)
            if (tree.node(child).action_from_parent == target) {
                kids.push_back(child);
                kid_probs.push_back(tree.child_prob(child));
            }
        if (kids.empty()) throw ModelError("rollout action has no outcomes");
        node = kids[rng.pick_weighted(kid_probs)];
    }
    return node;
}

McEstimate mc_value(const HistoryTree& tree, const std::vector<double>& rewards,
                    const Strategy& strategy, int samples, std::uint64_t seed) {
    if (samples <= 0) throw ModelError("mc_value needs samples > 0");
    Rng rng(seed);
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < samples; ++i) {
        const int leaf = sample_rollout(tree, strategy, rng);
        const double r = rewards.at(static_cast<std::size_t>(leaf));
        sum += r;
        sumsq += r * r;
    }
    McEstimate est;
    est.samples = samples;
    est.mean = sum / samples;
    const double var = std::max(0.0, sumsq / samples - est.mean * est.mean);
    est.std_error = samples > 1 ? std::sqrt(var / (samples - 1)) : 0.0;
    return est;
}

double memoryless_value(const HistoryTree& tree, const std::vector<double>& rewards,
                        const Strategy& strategy) {
    // visit-mass weighted action distribution per (state, time)
    std::vector<double> mass(static_cast<std::size_t>(tree.size()), 0.0);
    mass[0] = 1.0;
    std::map<std::pair<int, int>, std::map<int, double>> pooled;
    for (int id = 0; id < tree.size(); ++id) {
        if (tree.absorbed(id)) continue;
        const auto& n = tree.node(id);
        for (const auto& [target, p] : strategy.choice[id])
            pooled[{n.state, n.time}][target] += mass[id] * p;
        for (int child : tree.node(id).children) {
            const auto& cn = tree.node(child);
            const auto it = strategy.choice[id].find(cn.action_from_parent);
            const double p = it == strategy.choice[id].end() ? 0.0 : it->second;
            mass[child] += mass[id] * p * tree.child_prob(child);
        }
    }
    Strategy ml;
    ml.choice.resize(static_cast<std::size_t>(tree.size()));
    for (int id = 0; id < tree.size(); ++id) {
        if (tree.absorbed(id)) continue;
        const auto& n = tree.node(id);
        const auto& pool = pooled.at({n.state, n.time});
        double total = 0.0;
        for (const auto& [target, w] : pool) total += w;
        if (total > 1e-15) {
            for (const auto& [target, w] : pool) ml.choice[id][target] = w / total;
        } else {
            ml.choice[id] = strategy.choice[id]; // unvisited: no pooled evidence
        }
    }
    return expected_value_exact(tree, rewards, ml);
}

FullHorizonPlan plan_full_horizon(const LabeledMdp& mdp, const TaskSet& tasks, int horizon,
                                  const RewardOptions& reward_opts, const UnrollLimits& limits,
                                  const SolveOptions& solver) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    FullHorizonPlan plan;
    plan.tree = HistoryTree::unroll(mdp, horizon, horizon, limits);
    std::vector<double> rewards(static_cast<std::size_t>(plan.tree.size()), 0.0);
    for (int id = 0; id < plan.tree.size(); ++id)
        if (plan.tree.absorbed(id)) rewards[id] = terminal_reward(tasks, plan.tree, id, reward_opts);
    plan.lp = build_occupancy_lp(plan.tree, rewards);
    plan.encode_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    const auto t1 = Clock::now();
    plan.solution = solve_lp(plan.lp.model, true, solver);
    if (plan.solution.status != SolveStatus::Optimal)
        throw ModelError(std::string("occupancy LP: ") + status_name(plan.solution.status));
    plan.strategy = extract_strategy(plan.tree, plan.lp, plan.solution);
    plan.value = plan.solution.objective;
    plan.solve_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
    return plan;
}

} // namespace trp
