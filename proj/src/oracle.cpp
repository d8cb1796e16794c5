#include "trp/oracle.hpp"

#include <algorithm>
#include <chrono>

#include "trp/milp.hpp" // kInf

namespace trp {
namespace oracle {

namespace {

using Clock = std::chrono::steady_clock;

struct Domain {
    int lo;
    int hi;
};

Domain domain_of(const TimedWord& w, const EvalOptions& opts) {
    return {w.start_time() - opts.negative_padding, opts.horizon.value_or(w.horizon())};
}

int conj(int a, int b) { return (a > 0 && b > 0) ? +1 : -1; }

// Literal recursion over the defining equations.  Out-of-domain reads throw;
// under Truncate the windows are clipped first so they never leave the domain.
int rec(const Formula& f, const TimedWord& w, int t, const EvalOptions& opts,
        const Domain& dom) {
    switch (f->op) {
    case Op::True:
        return +1;
    case Op::Atom:
        return w.labels_at(t).count(f->atom) ? +1 : -1;
    case Op::Not:
        return -rec(f->children[0], w, t, opts, dom);
    case Op::And:
    case Op::Or: {
        // evaluate every child: an undetermined sibling outweighs a decided one
        std::vector<int> vals;
        for (const auto& c : f->children) vals.push_back(rec(c, w, t, opts, dom));
        if (f->op == Op::And)
            return std::all_of(vals.begin(), vals.end(), [](int v) { return v > 0; }) ? +1 : -1;
        return std::any_of(vals.begin(), vals.end(), [](int v) { return v > 0; }) ? +1 : -1;
    }
    case Op::Globally:
    case Op::Eventually: {
        const int wl = t + f->window.lo;
        const int wh = t + f->window.hi;
        if (opts.windows == WindowPolicy::Strict && wh > dom.hi)
            throw OutOfHorizonError("window beyond horizon");
        const int end = std::min(wh, dom.hi);
        if (f->op == Op::Globally) {
            for (int q = wl; q <= end; ++q)
                if (rec(f->children[0], w, q, opts, dom) < 0) return -1;
            return +1;
        }
        for (int q = wl; q <= end; ++q)
            if (rec(f->children[0], w, q, opts, dom) > 0) return +1;
        return -1;
    }
    case Op::Until: {
        const int wl = t + f->window.lo;
        const int wh = t + f->window.hi;
        if (opts.windows == WindowPolicy::Strict && wh > dom.hi)
            throw OutOfHorizonError("window beyond horizon");
        const int end = std::min(wh, dom.hi);
        int hold = +1;
        for (int q = t; q < wl && q <= end; ++q)
            hold = conj(hold, rec(f->children[0], w, q, opts, dom));
        for (int q = wl; q <= end; ++q) {
            int inner = hold;
            if (opts.until == UntilSemantics::IncludeEnd)
                inner = conj(inner, rec(f->children[0], w, q, opts, dom));
            const int d = conj(rec(f->children[1], w, q, opts, dom), inner);
            if (d > 0) return +1;
            hold = conj(hold, rec(f->children[0], w, q, opts, dom));
        }
        return -1;
    }
    }
    throw ModelError("unhandled formula node");
}

} // namespace

int char_value(const Formula& f, const TimedWord& w, int t, const EvalOptions& opts) {
    const Domain dom = domain_of(w, opts);
    if (t < dom.lo || t > dom.hi)
        throw OutOfHorizonError("query at t=" + std::to_string(t) +
                                " outside evaluation domain");
    return rec(f, w, t, opts, dom);
}

int shift_scan_robustness(const Formula& f, const TimedWord& w, int t,
                          RobustnessVariant variant, const EvalOptions& opts) {
    const Domain dom = domain_of(w, opts);
    const int chi = char_value(f, w, t, opts);
    auto scan = [&](int step) {
        int tau = 0;
        for (int shift = 1;; ++shift) {
            const int q = t + step * shift;
            if (q < dom.lo || q > dom.hi) break;
            int v;
            try {
                v = char_value(f, w, q, opts);
            } catch (const OutOfHorizonError&) {
                break; // the word stops determining the value here
            }
            if (v != chi) break;
            tau = shift;
        }
        return tau;
    };
    int tau = 0;
    switch (variant) {
    case RobustnessVariant::Right: tau = scan(-1); break;
    case RobustnessVariant::Left: tau = scan(+1); break;
    case RobustnessVariant::Combined: tau = std::min(scan(-1), scan(+1)); break;
    }
    return chi * tau;
}

double weighted(const TaskSet& tasks, const TimedWord& w, RobustnessVariant variant,
                const EvalOptions& opts) {
    double total = 0.0;
    for (const auto& task : tasks.tasks)
        total += task.priority * shift_scan_robustness(task.formula, w, 0, variant, opts);
    return total;
}

namespace {

struct PathSearch {
    const Vwts& ts;
    const TaskSet& tasks;
    int horizon;
    RobustnessVariant variant;
    const EvalOptions& opts;
    const Budget& budget;
    Clock::time_point start;

    BestPath best;
    bool have_best = false;
    std::vector<int> states;
    std::vector<int> times;

    void visit(int s, int t) {
        states.push_back(s);
        times.push_back(t);
        bool moved = false;
        for (int s2 : ts.adjacency(s)) {
            const int arrival = t + ts.delta(s, t, s2);
            if (arrival > horizon) continue;
            moved = true;
            visit(s2, arrival);
        }
        if (!moved) {
            // maximal path: no move fits inside the horizon
            if (++best.paths_enumerated > budget.max_paths)
                throw ResourceLimitError("path enumeration exceeded budget");
            if ((best.paths_enumerated & 1023) == 0 &&
                std::chrono::duration<double>(Clock::now() - start).count() >
                    budget.max_seconds)
                throw ResourceLimitError("path enumeration exceeded time budget");
            std::vector<TimedWord::Entry> entries;
            for (std::size_t i = 0; i < states.size(); ++i)
                entries.push_back({ts.labels(states[i]), times[i]});
            const TimedWord word = TimedWord::from_entries(std::move(entries));
            const double obj = weighted(tasks, word, variant, opts);
            // strict improvement keeps the first (lexicographically smallest) path
            if (!have_best || obj > best.objective) {
                have_best = true;
                best.objective = obj;
                best.path.states = states;
            }
        }
        states.pop_back();
        times.pop_back();
    }
};

} // namespace

BestPath best_path_bruteforce(const Vwts& ts, const TaskSet& tasks, int horizon,
                              RobustnessVariant variant, const EvalOptions& opts,
                              const Budget& budget) {
    tasks.validate();
    PathSearch search{ts, tasks, horizon, variant, opts, budget, Clock::now(), {}, false,
                      {},  {}};
    search.visit(ts.initial(), 0);
    if (!search.have_best) throw ModelError("no feasible path (horizon too small?)");
    return search.best;
}

namespace {

struct Expectimax {
    const LabeledMdp& mdp;
    const TaskSet& tasks;
    int horizon;
    RobustnessVariant variant;
    EvalOptions eval;
    const Budget& budget;
    long long nodes = 0;

    std::vector<std::pair<int, int>> trace;

    double value(int s, int t) {
        if (++nodes > budget.max_history_nodes)
            throw ResourceLimitError("expectimax exceeded node budget");
        if (t >= horizon) {
            std::vector<TimedWord::Entry> entries;
            for (const auto& [ps, pt] : trace) entries.push_back({mdp.labels(ps), pt});
            const TimedWord word = TimedWord::from_entries(std::move(entries));
            return weighted(tasks, word, variant, eval);
        }
        double best = -kInf;
        for (int target : mdp.enabled_actions(s, t)) {
            double expectation = 0.0;
            for (const auto& o : mdp.action_outcomes(s, t, target)) {
                const int arrival = std::min(t + o.dt, horizon);
                trace.push_back({target, arrival});
                expectation += o.prob * value(target, arrival);
                trace.pop_back();
            }
            best = std::max(best, expectation);
        }
        return best;
    }
};

} // namespace

double expectimax_mdp(const LabeledMdp& mdp, const TaskSet& tasks, int horizon,
                      RobustnessVariant variant, const RewardOptions& reward_opts,
                      const Budget& budget) {
    tasks.validate();
    EvalOptions eval;
    eval.until = reward_opts.until;
    eval.windows = WindowPolicy::Truncate;
    eval.negative_padding =
        variant == RobustnessVariant::Right ? reward_opts.robustness_window : 0;
    eval.horizon = horizon;
    Expectimax search{mdp, tasks, horizon, variant, eval, budget, 0, {}};
    search.trace.push_back({mdp.initial(), 0});
    return search.value(mdp.initial(), 0);
}

} // namespace oracle
} // namespace trp
