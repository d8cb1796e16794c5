#include "trp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace trp {

namespace {

using Clock = std::chrono::steady_clock;

struct BoundChange {
    int var;
    double lo;
    double hi;
};

struct Node {
    long long id = 0;
    double bound = kInf; // parent LP objective
    std::vector<BoundChange> changes;
};

struct NodeOrder {
    // best bound first; FIFO on ties for determinism
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;
        return a.id > b.id;
    }
};

void apply_changes(MilpModel& m, const std::vector<BoundChange>& changes) {
    for (const auto& c : changes) {
        auto& v = m.vars[static_cast<std::size_t>(c.var)];
        v.lo = std::max(v.lo, c.lo);
        v.hi = std::min(v.hi, c.hi);
    }
}

void revert(MilpModel& m, const MilpModel& original, const std::vector<BoundChange>& changes) {
    for (const auto& c : changes) {
        m.vars[static_cast<std::size_t>(c.var)].lo = original.vars[c.var].lo;
        m.vars[static_cast<std::size_t>(c.var)].hi = original.vars[c.var].hi;
    }
}

int most_fractional(const MilpModel& m, const std::vector<double>& x, double int_tol) {
    int pick = -1;
    double best = int_tol;
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        if (m.vars[j].kind == VarKind::Continuous) continue;
        const double frac = std::abs(x[j] - std::round(x[j]));
        if (frac > best) {
            best = frac;
            pick = static_cast<int>(j);
        }
    }
    return pick;
}

} // namespace

SolveResult solve_milp(const MilpModel& model, const SolveOptions& opts) {
    model.validate();
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    auto remaining = [&] { return opts.time_limit_s - elapsed(); };

    SolveResult out;
    out.status = SolveStatus::NumericFailure;
    out.bound = kInf;
    out.objective = -kInf;

    MilpModel work = model;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long long next_id = 0;
    open.push({next_id++, kInf, {}});

    bool have_incumbent = false;
    std::vector<double> incumbent;
    double incumbent_obj = -kInf;
    long long processed = 0;

    auto finish = [&](SolveStatus status, double bound) {
        out.status = status;
        out.bound = bound;
        out.nodes = processed;
        if (have_incumbent) {
            out.objective = incumbent_obj;
            out.assignment = std::move(incumbent);
        }
        out.wall_seconds = elapsed();
        return out;
    };

    while (!open.empty()) {
        if (remaining() <= 0.0)
            return finish(SolveStatus::TimeLimit,
                          std::max(open.top().bound, have_incumbent ? incumbent_obj : -kInf));
        Node node = open.top();
        open.pop();
        if (have_incumbent && node.bound <= incumbent_obj + 1e-9) continue;

        apply_changes(work, node.changes);
        SolveOptions lp_opts = opts;
        lp_opts.time_limit_s = remaining();
        SolveResult lp = solve_lp(work, true, lp_opts);
        revert(work, model, node.changes);

        out.iterations += lp.iterations;
        if (node.id != 0) ++processed;

        if (lp.status == SolveStatus::TimeLimit)
            return finish(SolveStatus::TimeLimit,
                          std::max(node.bound, have_incumbent ? incumbent_obj : -kInf));
        if (lp.status == SolveStatus::NumericFailure) return finish(lp.status, node.bound);
        if (lp.status == SolveStatus::Unbounded && node.id == 0)
            return finish(SolveStatus::Unbounded, kInf);
        if (lp.status != SolveStatus::Optimal) continue; // infeasible node

        if (have_incumbent && lp.objective <= incumbent_obj + 1e-9) continue;

        const int branch_var = most_fractional(model, lp.assignment, opts.int_tol);
        if (branch_var < 0) {
            // integral: snap and keep as incumbent
            std::vector<double> x = lp.assignment;
            for (std::size_t j = 0; j < model.vars.size(); ++j)
                if (model.vars[j].kind != VarKind::Continuous) x[j] = std::round(x[j]);
            incumbent = std::move(x);
            incumbent_obj = lp.objective;
            have_incumbent = true;
            continue;
        }

        if (processed >= opts.max_nodes)
            return finish(SolveStatus::TimeLimit,
                          std::max(lp.objective, have_incumbent ? incumbent_obj : -kInf));

        const double val = lp.assignment[static_cast<std::size_t>(branch_var)];
        Node down{next_id++, lp.objective, node.changes};
        down.changes.push_back({branch_var, -kInf, std::floor(val)});
        Node up{next_id++, lp.objective, node.changes};
        up.changes.push_back({branch_var, std::ceil(val), kInf});
        const auto& vb = model.vars[static_cast<std::size_t>(branch_var)];
        if (std::floor(val) >= vb.lo) open.push(std::move(down));
        if (std::ceil(val) <= vb.hi) open.push(std::move(up));
    }

    if (!have_incumbent) return finish(SolveStatus::Infeasible, -kInf);
    return finish(SolveStatus::Optimal, incumbent_obj);
}

} // namespace trp
