#include "trp/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace trp {

void EncodingConfig::validate(const TaskSet& tasks) const {
    tasks.validate();
    if (horizon <= 0) throw ModelError("planning horizon must be positive");
    if (robustness_window < 0) throw ModelError("robustness window must be >= 0");
    const int task_horizon = tasks.max_horizon();
    if (horizon <= task_horizon)
        throw ModelError("planning horizon T=" + std::to_string(horizon) +
                         " must exceed the tasks' maximum horizon ||D||=" +
                         std::to_string(task_horizon));
    if (variant == RobustnessVariant::Left && horizon < task_horizon + robustness_window)
        std::cerr << "[trp] warning: left-robustness headroom " << robustness_window
                  << " exceeds T - ||D||; streaks will truncate at the horizon\n";
}

LinExpr TsHandles::occ_expr(int t) const {
    LinExpr e;
    e.terms = occ.at(static_cast<std::size_t>(t));
    return e;
}

TsHandles encode_ts(const Vwts& ts, const EncodingConfig& cfg, MilpModel& model) {
    const int n = ts.num_states();
    const int T = cfg.horizon;
    TsHandles h;
    h.num_states = n;
    h.horizon = T;
    h.b.resize(static_cast<std::size_t>(n) * (T + 1));
    h.occ.resize(static_cast<std::size_t>(T) + 1);

    for (int s = 0; s < n; ++s)
        for (int t = 0; t <= T; ++t) {
            const int v = model.add_var("b_" + ts.state_name(s) + "_" + std::to_string(t),
                                        VarKind::Binary, 0.0, 1.0);
            h.b[static_cast<std::size_t>(s) * (T + 1) + t] = v;
            h.occ[static_cast<std::size_t>(t)].push_back({v, 1.0});
        }

    // initial occupancy
    model.add_con("init", term(h.b_var(ts.initial(), 0)), ConSense::Eq, 1.0);

    // at most one state per time
    for (int t = 0; t <= T; ++t)
        model.add_con("occ_" + std::to_string(t), h.occ_expr(t), ConSense::Le, 1.0);

    // unit edge flows; arrival beyond the horizon drops the move
    // inflow[s'][t'] collects flows landing on (s', t')
    std::vector<std::vector<std::vector<LinTerm>>> inflow(
        static_cast<std::size_t>(n), std::vector<std::vector<LinTerm>>(T + 1));
    for (int s = 0; s < n; ++s) {
        const auto adj = ts.adjacency(s);
        for (int t = 0; t <= T; ++t) {
            LinExpr succ;    // paper-style successor occupancy sum
            LinExpr outflow; // moves departing (s, t)
            for (int s2 : adj) {
                const int arrival = t + ts.delta(s, t, s2);
                if (arrival > T) continue;
                succ.add(h.b_var(s2, arrival), 1.0);
                const int f = model.add_var("f_" + ts.state_name(s) + "_" + std::to_string(t) +
                                                "_" + ts.state_name(s2),
                                            VarKind::Binary, 0.0, 1.0);
                outflow.add(f, 1.0);
                inflow[static_cast<std::size_t>(s2)][static_cast<std::size_t>(arrival)]
                    .push_back({f, 1.0});
            }
            if (succ.terms.empty()) continue; // no move fits: occupancy may end here
            LinExpr succ_minus_b = succ;
            succ_minus_b.add(h.b_var(s, t), -1.0);
            model.add_con("succ_" + ts.state_name(s) + "_" + std::to_string(t), succ_minus_b,
                          ConSense::Ge, 0.0);
            if (cfg.legacy_transition_bound)
                model.add_con("succ1_" + ts.state_name(s) + "_" + std::to_string(t), succ,
                              ConSense::Le, 1.0);
            LinExpr out_minus_b = outflow;
            out_minus_b.add(h.b_var(s, t), -1.0);
            model.add_con("move_" + ts.state_name(s) + "_" + std::to_string(t), out_minus_b,
                          ConSense::Eq, 0.0);
        }
    }
    // every occupancy after t = 0 is caused by exactly the move that reaches it
    for (int s = 0; s < n; ++s)
        for (int t = 1; t <= T; ++t) {
            LinExpr e;
            e.terms = inflow[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
            e.add(h.b_var(s, t), -1.0);
            model.add_con("cause_" + ts.state_name(s) + "_" + std::to_string(t), e, ConSense::Eq,
                          0.0);
        }
    return h;
}

TrackingHandles encode_label_tracking(MilpModel& model, const TsHandles& ts,
                                      const EncodingConfig& cfg) {
    const int T = cfg.horizon;
    const double M = cfg.big_m();
    TrackingHandles h;
    h.q.resize(static_cast<std::size_t>(T) + 1);
    h.q_tilde.resize(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t <= T; ++t) {
        h.q[t] = model.add_var("q_" + std::to_string(t), VarKind::Integer, 0.0, T);
        h.q_tilde[t] =
            model.add_var("qt_" + std::to_string(t), VarKind::Integer, 0.0, T);
    }
    for (int t = 0; t <= T; ++t) {
        const LinExpr occ = ts.occ_expr(t);
        if (t == 0) {
            // q^0 = (q^-1 + 1)(1 - occ^0) with q^-1 = 0
            LinExpr e = term(h.q[0]);
            e += occ;
            model.add_con("q_def_0", e, ConSense::Eq, 1.0);
        } else {
            // occupied -> q = 0; unoccupied -> q = q^{t-1} + 1
            LinExpr up = term(h.q[t]);
            up.add(h.q[t - 1], -1.0);
            model.add_con("q_step_ub_" + std::to_string(t), up, ConSense::Le, 1.0);
            LinExpr lo = term(h.q[t]);
            lo.add(h.q[t - 1], -1.0);
            for (const auto& o : occ.terms) lo.add(o.var, M);
            model.add_con("q_step_lb_" + std::to_string(t), lo, ConSense::Ge, 1.0);
            LinExpr cap = term(h.q[t]);
            for (const auto& o : occ.terms) cap.add(o.var, M);
            model.add_con("q_zero_" + std::to_string(t), cap, ConSense::Le, M);
        }
        LinExpr tie = term(h.q_tilde[t]);
        tie.add(h.q[t], 1.0);
        model.add_con("qt_def_" + std::to_string(t), tie, ConSense::Eq, t);
    }
    return h;
}

namespace {

void postorder(const Formula& f, std::vector<const FormulaNode*>& out) {
    for (const auto& c : f->children) postorder(c, out);
    out.push_back(f.get());
}

void encode_conjunction(MilpModel& model, const std::string& name, int z,
                        const std::vector<int>& parts) {
    LinExpr sum;
    for (int p : parts) {
        LinExpr le = term(z);
        le.add(p, -1.0);
        model.add_con(name + "_le", le, ConSense::Le, 0.0);
        sum.add(p, 1.0);
    }
    sum.add(z, -1.0);
    model.add_con(name + "_ge", sum, ConSense::Le,
                  static_cast<double>(parts.size()) - 1.0);
}

void encode_disjunction(MilpModel& model, const std::string& name, int z,
                        const std::vector<int>& parts) {
    LinExpr sum = term(z);
    for (int p : parts) {
        LinExpr ge = term(z);
        ge.add(p, -1.0);
        model.add_con(name + "_ge", ge, ConSense::Ge, 0.0);
        sum.add(p, -1.0);
    }
    model.add_con(name + "_le", sum, ConSense::Le, 0.0);
}

} // namespace

MitlHandles encode_mitl(MilpModel& model, const Formula& formula, const Vwts& ts,
                        const TsHandles& tsh, const TrackingHandles& /*tracking*/,
                        const EncodingConfig& cfg) {
    MitlHandles h;
    h.t_lo = cfg.variant == RobustnessVariant::Right ? -cfg.robustness_window : 0;
    h.t_hi = cfg.horizon;
    postorder(formula, h.nodes);

    // map each child pointer to its post-order slot
    std::map<const FormulaNode*, std::size_t> slot;
    for (std::size_t i = 0; i < h.nodes.size(); ++i) slot[h.nodes[i]] = i;

    h.z.resize(h.nodes.size());
    const int span = h.t_hi - h.t_lo + 1;
    int counter = static_cast<int>(model.vars.size());
    for (std::size_t ni = 0; ni < h.nodes.size(); ++ni) {
        h.z[ni].resize(static_cast<std::size_t>(span));
        for (int t = h.t_lo; t <= h.t_hi; ++t)
            h.z[ni][static_cast<std::size_t>(t - h.t_lo)] = model.add_var(
                "z" + std::to_string(counter) + "_n" + std::to_string(ni) + "_t" +
                    std::to_string(t),
                VarKind::Binary, 0.0, 1.0);
    }

    auto fix = [&](int var, double v) {
        model.vars[static_cast<std::size_t>(var)].lo = v;
        model.vars[static_cast<std::size_t>(var)].hi = v;
    };

    for (std::size_t ni = 0; ni < h.nodes.size(); ++ni) {
        const FormulaNode* node = h.nodes[ni];
        const std::string base = "z" + std::to_string(ni);
        switch (node->op) {
        case Op::True:
            for (int t = h.t_lo; t <= h.t_hi; ++t) fix(h.z_var(ni, t), 1.0);
            break;
        case Op::Atom: {
            const bool known = ts.atoms().count(node->atom) > 0;
            for (int t = h.t_lo; t <= h.t_hi; ++t) {
                const int z = h.z_var(ni, t);
                if (t < 0 || !known) {
                    fix(z, 0.0); // fictive times carry no labels
                    continue;
                }
                LinExpr holders; // sum of b over states labeled with the atom
                for (int s = 0; s < ts.num_states(); ++s)
                    if (ts.labels(s).count(node->atom)) holders.add(tsh.b_var(s, t), 1.0);
                if (t == 0) {
                    model.add_eq(base + "_t0", term(z), holders);
                    continue;
                }
                // occupied: z equals the current holders sum;
                // unoccupied: z carries the previous value (label persistence)
                const LinExpr occ = tsh.occ_expr(t);
                LinExpr a = term(z);
                for (const auto& o : holders.terms) a.add(o.var, -o.coef);
                for (const auto& o : occ.terms) a.add(o.var, 1.0);
                model.add_con(base + "_pin_ub_" + std::to_string(t), a, ConSense::Le, 1.0);
                LinExpr bx = term(z, -1.0);
                for (const auto& o : holders.terms) bx.add(o.var, o.coef);
                for (const auto& o : occ.terms) bx.add(o.var, 1.0);
                model.add_con(base + "_pin_lb_" + std::to_string(t), bx, ConSense::Le, 1.0);
                const int zp = h.z_var(ni, t - 1);
                LinExpr c = term(z);
                c.add(zp, -1.0);
                for (const auto& o : occ.terms) c.add(o.var, -1.0);
                model.add_con(base + "_carry_ub_" + std::to_string(t), c, ConSense::Le, 0.0);
                LinExpr d = term(zp);
                d.add(z, -1.0);
                for (const auto& o : occ.terms) d.add(o.var, -1.0);
                model.add_con(base + "_carry_lb_" + std::to_string(t), d, ConSense::Le, 0.0);
            }
            break;
        }
        case Op::Not: {
            const std::size_t ci = slot.at(node->children[0].get());
            for (int t = h.t_lo; t <= h.t_hi; ++t) {
                LinExpr e = term(h.z_var(ni, t));
                e.add(h.z_var(ci, t), 1.0);
                model.add_con(base + "_neg_" + std::to_string(t), e, ConSense::Eq, 1.0);
            }
            break;
        }
        case Op::And:
        case Op::Or: {
            std::vector<std::size_t> kids;
            for (const auto& c : node->children) kids.push_back(slot.at(c.get()));
            for (int t = h.t_lo; t <= h.t_hi; ++t) {
                std::vector<int> parts;
                for (std::size_t ci : kids) parts.push_back(h.z_var(ci, t));
                if (node->op == Op::And)
                    encode_conjunction(model, base + "_and_" + std::to_string(t),
                                       h.z_var(ni, t), parts);
                else
                    encode_disjunction(model, base + "_or_" + std::to_string(t),
                                       h.z_var(ni, t), parts);
            }
            break;
        }
        case Op::Globally:
        case Op::Eventually: {
            const std::size_t ci = slot.at(node->children[0].get());
            for (int t = h.t_lo; t <= h.t_hi; ++t) {
                std::vector<int> parts;
                for (int q = t + node->window.lo; q <= std::min(t + node->window.hi, h.t_hi);
                     ++q)
                    parts.push_back(h.z_var(ci, q));
                const int z = h.z_var(ni, t);
                if (parts.empty()) {
                    fix(z, node->op == Op::Globally ? 1.0 : 0.0);
                    continue;
                }
                if (node->op == Op::Globally)
                    encode_conjunction(model, base + "_glob_" + std::to_string(t), z, parts);
                else
                    encode_disjunction(model, base + "_ev_" + std::to_string(t), z, parts);
            }
            break;
        }
        case Op::Until: {
            const std::size_t li = slot.at(node->children[0].get());
            const std::size_t ri = slot.at(node->children[1].get());
            for (int t = h.t_lo; t <= h.t_hi; ++t) {
                const int z = h.z_var(ni, t);
                std::vector<int> disjuncts;
                for (int q = t + node->window.lo; q <= std::min(t + node->window.hi, h.t_hi);
                     ++q) {
                    const int hold_end = cfg.until == UntilSemantics::ExcludeEnd ? q - 1 : q;
                    std::vector<int> parts{h.z_var(ri, q)};
                    for (int u = t; u <= hold_end; ++u) parts.push_back(h.z_var(li, u));
                    if (parts.size() == 1) {
                        disjuncts.push_back(parts[0]);
                        continue;
                    }
                    const int y = model.add_var(
                        base + "_u_" + std::to_string(t) + "_" + std::to_string(q),
                        VarKind::Binary, 0.0, 1.0);
                    encode_conjunction(
                        model, base + "_uc_" + std::to_string(t) + "_" + std::to_string(q), y,
                        parts);
                    disjuncts.push_back(y);
                }
                if (disjuncts.empty()) {
                    fix(z, 0.0);
                    continue;
                }
                encode_disjunction(model, base + "_ud_" + std::to_string(t), z, disjuncts);
            }
            break;
        }
        }
    }
    return h;
}

namespace {

struct CounterChain {
    int c1 = -1;
    int c0 = -1;
};

// One step of the streak-counter recurrences with big-M products:
//   c1 = (prev1 + 1) * z      counts the satisfied streak
//   c0 = (prev0 - 1) * (1-z)  counts the violated streak, negatively
CounterChain counter_step(MilpModel& model, const std::string& name, int z,
                          const CounterChain* prev, double M) {
    CounterChain c;
    c.c1 = model.add_var(name + "_c1", VarKind::Integer, 0.0, M);
    c.c0 = model.add_var(name + "_c0", VarKind::Integer, -M, 0.0);

    LinExpr gate1 = term(c.c1);
    gate1.add(z, -M);
    model.add_con(name + "_c1_gate", gate1, ConSense::Le, 0.0);
    LinExpr ub1 = term(c.c1);
    if (prev) ub1.add(prev->c1, -1.0);
    model.add_con(name + "_c1_ub", ub1, ConSense::Le, 1.0);
    LinExpr lb1 = term(c.c1);
    if (prev) lb1.add(prev->c1, -1.0);
    lb1.add(z, -M);
    model.add_con(name + "_c1_lb", lb1, ConSense::Ge, 1.0 - M);

    LinExpr gate0 = term(c.c0);
    gate0.add(z, -M);
    model.add_con(name + "_c0_gate", gate0, ConSense::Ge, -M);
    LinExpr lb0 = term(c.c0);
    if (prev) lb0.add(prev->c0, -1.0);
    model.add_con(name + "_c0_lb", lb0, ConSense::Ge, -1.0);
    LinExpr ub0 = term(c.c0);
    if (prev) ub0.add(prev->c0, -1.0);
    ub0.add(z, -M);
    model.add_con(name + "_c0_ub", ub0, ConSense::Le, -1.0);
    return c;
}

int finish_chain(MilpModel& model, const std::string& name, const CounterChain& last, int z0,
                 double M) {
    // corrections strip the step contributed by t = 0 itself
    const int ct1 = model.add_var(name + "_ct1", VarKind::Integer, -1.0, M);
    const int ct0 = model.add_var(name + "_ct0", VarKind::Integer, -M, 1.0);
    LinExpr e1 = term(ct1);
    e1.add(last.c1, -1.0);
    e1.add(z0, 1.0);
    model.add_con(name + "_ct1_def", e1, ConSense::Eq, 0.0);
    LinExpr e0 = term(ct0);
    e0.add(last.c0, -1.0);
    e0.add(z0, 1.0);
    model.add_con(name + "_ct0_def", e0, ConSense::Eq, 1.0);
    const int eta = model.add_var(name + "_eta", VarKind::Integer, -M, M);
    LinExpr def = term(eta);
    def.add(ct1, -1.0);
    def.add(ct0, -1.0);
    model.add_con(name + "_eta_def", def, ConSense::Eq, 0.0);
    return eta;
}

} // namespace

int encode_right_robustness(MilpModel& model, const MitlHandles& mitl,
                            const EncodingConfig& cfg) {
    const double M = cfg.big_m();
    const int lo = -cfg.robustness_window;
    CounterChain prev;
    bool have_prev = false;
    for (int t = lo; t <= 0; ++t) {
        const std::string name = "r" + std::to_string(model.vars.size()) + "_t" +
                                 std::to_string(t);
        CounterChain c = counter_step(model, name, mitl.root_z(t),
                                      have_prev ? &prev : nullptr, M);
        prev = c;
        have_prev = true;
    }
    return finish_chain(model, "r" + std::to_string(model.vars.size()), prev,
                        mitl.root_z(0), M);
}

int encode_left_robustness(MilpModel& model, const MitlHandles& mitl,
                           const EncodingConfig& cfg) {
    const double M = cfg.big_m();
    CounterChain prev;
    bool have_prev = false;
    for (int t = cfg.horizon; t >= 0; --t) {
        const std::string name = "l" + std::to_string(model.vars.size()) + "_t" +
                                 std::to_string(t);
        CounterChain c = counter_step(model, name, mitl.root_z(t),
                                      have_prev ? &prev : nullptr, M);
        prev = c;
        have_prev = true;
    }
    return finish_chain(model, "l" + std::to_string(model.vars.size()), prev,
                        mitl.root_z(0), M);
}

Problem1 build_problem1(const Vwts& ts, const TaskSet& tasks, const EncodingConfig& cfg) {
    cfg.validate(tasks);
    if (cfg.variant == RobustnessVariant::Combined)
        throw ModelError("the combined robustness variant has no MILP encoding; "
                         "plan with right or left");
    Problem1 p;
    p.cfg = cfg;
    p.model.name = "problem1";
    p.ts = encode_ts(ts, cfg, p.model);
    p.tracking = encode_label_tracking(p.model, p.ts, cfg);
    for (const auto& task : tasks.tasks) {
        MitlHandles mh = encode_mitl(p.model, task.formula, ts, p.ts, p.tracking, cfg);
        const int eta = cfg.variant == RobustnessVariant::Right
                            ? encode_right_robustness(p.model, mh, cfg)
                            : encode_left_robustness(p.model, mh, cfg);
        p.model.objective.add(eta, task.priority);
        p.tasks.push_back(std::move(mh));
        p.eta.push_back(eta);
    }
    p.model.objective.normalize();
    return p;
}

EvalOptions matched_eval_options(const EncodingConfig& cfg) {
    EvalOptions opts;
    opts.until = cfg.until;
    opts.windows = WindowPolicy::Truncate;
    opts.negative_padding =
        cfg.variant == RobustnessVariant::Right ? cfg.robustness_window : 0;
    opts.horizon = cfg.horizon;
    return opts;
}

DecodedSolution decode(const Problem1& enc, const Vwts& ts, const TaskSet& tasks,
                       const SolveResult& sol) {
    if (!sol.has_assignment()) throw ModelError("decode: solution has no assignment");
    const auto& x = sol.assignment;
    DecodedSolution out;

    std::vector<std::pair<int, int>> visits; // (time, state)
    for (int s = 0; s < enc.ts.num_states; ++s)
        for (int t = 0; t <= enc.ts.horizon; ++t) {
            const double v = x.at(static_cast<std::size_t>(enc.ts.b_var(s, t)));
            if (std::abs(v - std::round(v)) > 1e-6)
                throw ModelError("decode: fractional occupancy variable");
            if (v > 0.5) visits.push_back({t, s});
        }
    std::sort(visits.begin(), visits.end());
    if (visits.empty() || visits.front().first != 0 || visits.front().second != ts.initial())
        throw ModelError("decode: solution does not start at the initial state");

    for (const auto& [t, s] : visits) out.path.states.push_back(s);
    out.times = time_sequence(ts, out.path, enc.cfg.horizon);
    for (std::size_t i = 0; i < visits.size(); ++i)
        if (out.times.times[i] != visits[i].first)
            throw ModelError("decode: occupancy times disagree with the weight function");
    out.word = timed_word(ts, out.path, enc.cfg.horizon);

    const EvalOptions opts = matched_eval_options(enc.cfg);
    out.objective = 0.0;
    for (std::size_t i = 0; i < enc.eta.size(); ++i) {
        const double handle = x.at(static_cast<std::size_t>(enc.eta[i]));
        const int got = static_cast<int>(std::llround(handle));
        if (std::abs(handle - got) > 1e-6)
            throw ModelError("decode: fractional robustness handle");
        const int expect =
            robustness(tasks.tasks[i].formula, out.word, 0, enc.cfg.variant, opts);
        if (expect != got)
            throw ModelError("decode: encoded robustness " + std::to_string(got) +
                             " disagrees with direct evaluation " + std::to_string(expect) +
                             " for task " + std::to_string(i));
        out.task_robustness.push_back(got);
        out.objective += tasks.tasks[i].priority * got;
    }
    return out;
}

void pin_path(MilpModel& model, const TsHandles& tsh, const Vwts& ts, const Path& path,
              int horizon) {
    const TimeSequence seq = time_sequence(ts, path, horizon);
    std::vector<char> on(static_cast<std::size_t>(tsh.num_states) * (horizon + 1), 0);
    for (std::size_t i = 0; i < path.states.size(); ++i)
        on[static_cast<std::size_t>(path.states[i]) * (horizon + 1) + seq.times[i]] = 1;
    for (int s = 0; s < tsh.num_states; ++s)
        for (int t = 0; t <= horizon; ++t) {
            auto& v = model.vars[static_cast<std::size_t>(tsh.b_var(s, t))];
            const double val = on[static_cast<std::size_t>(s) * (horizon + 1) + t] ? 1.0 : 0.0;
            v.lo = v.hi = val;
        }
}

} // namespace trp
