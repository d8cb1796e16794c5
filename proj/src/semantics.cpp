#include "trp/semantics.hpp"

#include <algorithm>
#include <vector>

namespace trp {

namespace {

// Grid values: +1 satisfied, -1 violated, 0 undetermined (Strict mode only).
using SignRow = std::vector<signed char>;

struct Grid {
    int lo = 0; // inclusive
    int hi = 0; // inclusive
    int size() const { return hi - lo + 1; }
};

signed char conj2(signed char a, signed char b) {
    if (a == 0 || b == 0) return 0;
    return (a > 0 && b > 0) ? +1 : -1;
}

// Bottom-up sweep: value of f at every grid point.
SignRow sweep(const Formula& f, const TimedWord& w, const Grid& g, const EvalOptions& opts) {
    const int n = g.size();
    SignRow out(static_cast<std::size_t>(n), 0);
    switch (f->op) {
    case Op::True:
        std::fill(out.begin(), out.end(), static_cast<signed char>(+1));
        return out;
    case Op::Atom: {
        for (int i = 0; i < n; ++i) {
            const int t = g.lo + i;
            out[i] = w.labels_at(t).count(f->atom) ? +1 : -1;
        }
        return out;
    }
    case Op::Not: {
        SignRow c = sweep(f->children[0], w, g, opts);
        for (int i = 0; i < n; ++i) out[i] = static_cast<signed char>(-c[i]);
        return out;
    }
    case Op::And:
    case Op::Or: {
        std::vector<SignRow> rows;
        rows.reserve(f->children.size());
        for (const auto& c : f->children) rows.push_back(sweep(c, w, g, opts));
        const bool is_and = f->op == Op::And;
        for (int i = 0; i < n; ++i) {
            signed char v = is_and ? +1 : -1;
            for (const auto& r : rows) {
                if (r[i] == 0) { v = 0; break; }
                if (is_and ? r[i] < 0 : r[i] > 0) v = is_and ? -1 : +1;
            }
            out[i] = v;
        }
        return out;
    }
    case Op::Globally:
    case Op::Eventually: {
        SignRow c = sweep(f->children[0], w, g, opts);
        const bool is_all = f->op == Op::Globally;
        for (int i = 0; i < n; ++i) {
            const int t = g.lo + i;
            const int wl = t + f->window.lo;
            const int wh = t + f->window.hi;
            if (opts.windows == WindowPolicy::Strict && wh > g.hi) { out[i] = 0; continue; }
            const int end = std::min(wh, g.hi);
            // empty window: vacuous conjunction / unavailable disjunction
            signed char v = is_all ? +1 : -1;
            for (int q = wl; q <= end; ++q) {
                const signed char cv = c[q - g.lo];
                if (cv == 0) { v = 0; break; }
                if (is_all ? cv < 0 : cv > 0) { v = is_all ? -1 : +1; break; }
            }
            out[i] = v;
        }
        return out;
    }
    case Op::Until: {
        SignRow c1 = sweep(f->children[0], w, g, opts);
        SignRow c2 = sweep(f->children[1], w, g, opts);
        const bool closed = opts.until == UntilSemantics::IncludeEnd;
        for (int i = 0; i < n; ++i) {
            const int t = g.lo + i;
            const int wl = t + f->window.lo;
            const int wh = t + f->window.hi;
            if (opts.windows == WindowPolicy::Strict && wh > g.hi) { out[i] = 0; continue; }
            const int end = std::min(wh, g.hi);
            if (wl > end) { out[i] = -1; continue; } // window fully truncated away
            signed char v = -1; // empty disjunction
            // running conjunction of c1 over [t, q-1] (or [t, q] when closed)
            signed char hold = +1;
            for (int q = t; q < wl; ++q) hold = conj2(hold, c1[q - g.lo]);
            for (int q = wl; q <= end; ++q) {
                signed char inner = hold;
                if (closed) inner = conj2(inner, c1[q - g.lo]);
                const signed char d = conj2(c2[q - g.lo], inner);
                if (d == 0) { v = 0; break; }
                if (d > 0) { v = +1; break; }
                hold = conj2(hold, c1[q - g.lo]);
                if (hold < 0 && opts.windows == WindowPolicy::Truncate)
                    break; // no later q can satisfy
            }
            out[i] = v;
        }
        return out;
    }
    }
    throw ModelError("unhandled formula node");
}

Grid make_grid(const TimedWord& w, const EvalOptions& opts) {
    if (w.empty()) throw ModelError("empty timed word");
    if (opts.negative_padding < 0) throw ModelError("negative_padding must be >= 0");
    Grid g;
    g.lo = w.start_time() - opts.negative_padding;
    g.hi = opts.horizon.value_or(w.horizon());
    if (g.hi < w.start_time())
        throw ModelError("evaluation horizon precedes the word start");
    return g;
}

signed char value_at(const SignRow& row, const Grid& g, int t) {
    if (t < g.lo || t > g.hi)
        throw OutOfHorizonError("query at t=" + std::to_string(t) +
                                " outside evaluation domain [" + std::to_string(g.lo) + "," +
                                std::to_string(g.hi) + "]");
    return row[static_cast<std::size_t>(t - g.lo)];
}

} // namespace

int characteristic(const Formula& f, const TimedWord& w, int t, const EvalOptions& opts) {
    const Grid g = make_grid(w, opts);
    const SignRow row = sweep(f, w, g, opts);
    const signed char v = value_at(row, g, t);
    if (v == 0)
        throw OutOfHorizonError("the word does not determine the value at t=" +
                                std::to_string(t));
    return v;
}

int robustness(const Formula& f, const TimedWord& w, int t, RobustnessVariant variant,
               const EvalOptions& opts) {
    const Grid g = make_grid(w, opts);
    const SignRow row = sweep(f, w, g, opts);
    const signed char chi = value_at(row, g, t);
    if (chi == 0)
        throw OutOfHorizonError("the word does not determine the value at t=" +
                                std::to_string(t));
    auto scan = [&](int step) {
        int tau = 0;
        for (int q = t + step; q >= g.lo && q <= g.hi; q += step) {
            if (row[static_cast<std::size_t>(q - g.lo)] != chi) break;
            ++tau;
        }
        return tau;
    };
    int tau = 0;
    switch (variant) {
    case RobustnessVariant::Right: tau = scan(-1); break;
    case RobustnessVariant::Left: tau = scan(+1); break;
    case RobustnessVariant::Combined: tau = std::min(scan(-1), scan(+1)); break;
    }
    return static_cast<int>(chi) * tau;
}

double weighted_objective(const TaskSet& tasks, const TimedWord& w, RobustnessVariant variant,
                          const EvalOptions& opts) {
    tasks.validate();
    double total = 0.0;
    for (const auto& task : tasks.tasks)
        total += task.priority * robustness(task.formula, w, 0, variant, opts);
    return total;
}

} // namespace trp
