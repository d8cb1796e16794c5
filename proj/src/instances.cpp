#include "trp/instances.hpp"

#include <algorithm>

namespace trp {

Formula random_formula(Rng& rng, const std::vector<std::string>& atoms,
                       const FormulaGenOptions& opts) {
    if (atoms.empty()) throw ModelError("random_formula needs atoms");
    if (opts.max_depth <= 0 || rng.uniform() < 0.25) {
        if (rng.uniform() < 0.06) return make_true();
        return make_atom(atoms[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(atoms.size()) - 1))]);
    }
    FormulaGenOptions deeper = opts;
    deeper.max_depth = opts.max_depth - 1;
    auto sub = [&] { return random_formula(rng, atoms, deeper); };
    auto window = [&] {
        const int a = rng.uniform_int(0, opts.max_interval);
        return Interval{a, a + rng.uniform_int(0, opts.max_interval)};
    };
    switch (rng.uniform_int(0, opts.allow_until ? 5 : 4)) {
    case 0: return make_not(sub());
    case 1: {
        std::vector<Formula> kids;
        const int n = rng.uniform_int(2, std::max(2, opts.max_arity));
        for (int i = 0; i < n; ++i) kids.push_back(sub());
        return make_and(std::move(kids));
    }
    case 2: {
        std::vector<Formula> kids;
        const int n = rng.uniform_int(2, std::max(2, opts.max_arity));
        for (int i = 0; i < n; ++i) kids.push_back(sub());
        return make_or(std::move(kids));
    }
    case 3: return make_globally(window(), sub());
    case 4: return make_eventually(window(), sub());
    default: return make_until(window(), sub(), sub());
    }
}

TimedWord random_word(Rng& rng, const std::vector<std::string>& atoms, int max_entries,
                      int max_horizon) {
    const int entries = rng.uniform_int(1, std::max(1, max_entries));
    std::vector<TimedWord::Entry> out;
    int t = 0;
    for (int i = 0; i < entries && t <= max_horizon; ++i) {
        std::set<std::string> labels;
        for (const auto& a : atoms)
            if (rng.bernoulli(0.4)) labels.insert(a);
        out.push_back({std::move(labels), t});
        t += rng.uniform_int(1, 3);
    }
    return TimedWord::from_entries(std::move(out));
}

namespace {

std::vector<std::string> atom_names(int n) {
    static const char* pool[] = {"exit", "off1", "off2", "lab", "kitc", "dock", "hall", "stor"};
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i)
        out.push_back(i < 8 ? pool[i] : "p" + std::to_string(i));
    return out;
}

} // namespace

Vwts random_vwts(Rng& rng, const VwtsGenOptions& opts) {
    const int n = opts.num_states;
    const auto atoms = atom_names(opts.num_atoms);
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        if (rng.uniform() < 0.75)
            labels[i].insert(atoms[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(atoms.size()) - 1))]);
    Vwts ts(std::move(names), std::move(labels), 0);

    auto schedule = [&] {
        Vwts::EdgeSchedule sched;
        const int base = rng.uniform_int(1, opts.max_weight);
        sched.default_weight = base;
        if (rng.uniform() < opts.time_varying) {
            const int from = rng.uniform_int(0, std::max(0, opts.horizon - 2));
            const int to = std::min(opts.horizon, from + rng.uniform_int(1, 4));
            int w = rng.uniform_int(1, opts.max_weight);
            if (w == base) w = std::min(opts.max_weight, w + 1);
            sched.windows.push_back({from, to, w});
        }
        return sched;
    };

    // backbone keeps every state reachable
    for (int i = 1; i < n; ++i) {
        const int prev = rng.uniform_int(0, i - 1);
        ts.add_edge(prev, i, schedule());
        ts.add_edge(i, prev, schedule());
    }
    for (int k = 0; k < opts.extra_edges; ++k) {
        const int a = rng.uniform_int(0, n - 1);
        const int b = rng.uniform_int(0, n - 1);
        if (a == b || ts.has_edge(a, b)) continue;
        ts.add_edge(a, b, schedule());
    }
    return ts;
}

LabeledMdp random_mdp(Rng& rng, const MdpGenOptions& opts) {
    const int n = opts.num_states;
    const auto atoms = atom_names(opts.num_atoms);
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        if (rng.uniform() < 0.8)
            labels[i].insert(atoms[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(atoms.size()) - 1))]);
    LabeledMdp mdp(std::move(names), std::move(labels), 0);

    auto outcome_list = [&] {
        const int k = rng.uniform_int(1, opts.max_outcomes);
        std::vector<int> delays;
        for (int i = 0; i < k; ++i) {
            int dt = rng.uniform_int(1, opts.max_delay);
            while (std::find(delays.begin(), delays.end(), dt) != delays.end() &&
                   static_cast<int>(delays.size()) < opts.max_delay)
                dt = rng.uniform_int(1, opts.max_delay);
            if (std::find(delays.begin(), delays.end(), dt) == delays.end())
                delays.push_back(dt);
        }
        std::sort(delays.begin(), delays.end());
        std::vector<DelayOutcome> out;
        // probabilities in 1/8 grid so masses sum to 1 exactly
        int remaining = 8;
        for (std::size_t i = 0; i < delays.size(); ++i) {
            const int last = static_cast<int>(delays.size()) - 1 - static_cast<int>(i);
            const int share = last == 0 ? remaining : rng.uniform_int(1, remaining - last);
            out.push_back({delays[i], share / 8.0});
            remaining -= share;
        }
        return out;
    };

    auto make_edge = [&](int from, int to) {
        LabeledMdp::Edge edge;
        edge.from = from;
        edge.to = to;
        edge.default_outcomes = outcome_list();
        if (rng.uniform() < opts.time_varying) {
            const int from_t = rng.uniform_int(0, std::max(0, opts.horizon - 2));
            const int to_t = std::min(opts.horizon, from_t + rng.uniform_int(1, 3));
            edge.windows.push_back({from_t, to_t, outcome_list()});
        }
        mdp.add_edge(std::move(edge));
    };

    for (int i = 1; i < n; ++i) {
        const int prev = rng.uniform_int(0, i - 1);
        make_edge(prev, i);
        make_edge(i, prev);
    }
    for (int k = 0; k < opts.extra_edges; ++k) {
        const int a = rng.uniform_int(0, n - 1);
        const int b = rng.uniform_int(0, n - 1);
        if (a == b) continue;
        bool exists = false;
        for (const auto& e : mdp.edges())
            if (e.from == a && e.to == b) exists = true;
        if (!exists) make_edge(a, b);
    }
    return mdp;
}

std::vector<std::string> office_atom_pool() {
    return {"exit", "off1", "off2", "lab", "kitc"};
}

Vwts office_vwts(int num_states, int horizon, std::uint64_t seed) {
    if (num_states < 2) throw ModelError("office environment needs >= 2 states");
    Rng rng(seed ^ 0x0ff1ce);
    const auto pool = office_atom_pool();
    // corridor backbone c0..c{k-1}; every third state is a labeled room
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels(static_cast<std::size_t>(num_states));
    for (int i = 0; i < num_states; ++i) names.push_back("s" + std::to_string(i));
    for (int i = 0; i < num_states; ++i)
        if (i % 3 == 0)
            labels[i].insert(pool[static_cast<std::size_t>(i / 3) % pool.size()]);
    Vwts ts(std::move(names), std::move(labels), 0);

    const int lunch_from = horizon / 3;
    const int lunch_to = horizon / 2;
    auto schedule = [&] {
        Vwts::EdgeSchedule sched;
        const int base = 1 + rng.uniform_int(0, 2);
        sched.default_weight = base;
        sched.windows.push_back({lunch_from, lunch_to, base + 1 + rng.uniform_int(0, 1)});
        return sched;
    };
    for (int i = 1; i < num_states; ++i) {
        // corridor chain plus a shortcut every fifth state
        ts.add_edge(i - 1, i, schedule());
        ts.add_edge(i, i - 1, schedule());
        if (i % 5 == 4 && i >= 5) {
            ts.add_edge(i, i - 5, schedule());
            ts.add_edge(i - 5, i, schedule());
        }
    }
    return ts;
}

TaskSet office_tasks(int count, int horizon, std::uint64_t seed) {
    Rng rng(seed ^ 0x7a5f);
    const auto pool = office_atom_pool();
    TaskSet tasks;
    for (int i = 0; i < count; ++i) {
        const std::string& atom = pool[static_cast<std::size_t>(i) % pool.size()];
        const int b = std::max(2, horizon / 2 + rng.uniform_int(-horizon / 8, horizon / 8));
        const int a = rng.uniform_int(0, b / 2);
        Formula f = i % 3 == 2 ? make_globally({a, std::min(a + 2, b)}, make_atom(atom))
                               : make_eventually({a, b}, make_atom(atom));
        tasks.tasks.push_back({std::move(f), static_cast<double>(1 + (i % 3))});
    }
    return tasks;
}

LabeledMdp office_mdp(int num_states, std::uint64_t seed) {
    if (num_states < 2) throw ModelError("office MDP needs >= 2 states");
    Rng rng(seed ^ 0x3d9);
    const auto pool = office_atom_pool();
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels(static_cast<std::size_t>(num_states));
    for (int i = 0; i < num_states; ++i) names.push_back("s" + std::to_string(i));
    for (int i = 0; i < num_states; ++i)
        if (i % 2 == 0)
            labels[i].insert(pool[static_cast<std::size_t>(i / 2) % pool.size()]);
    LabeledMdp mdp(std::move(names), std::move(labels), 0);

    auto congested = [&](int base) {
        std::vector<DelayOutcome> out;
        out.push_back({base, 0.5});
        out.push_back({base + rng.uniform_int(1, 2), 0.5});
        return out;
    };
    for (int i = 1; i < num_states; ++i) {
        const int base = 1 + rng.uniform_int(0, 1);
        LabeledMdp::Edge fwd;
        fwd.from = i - 1;
        fwd.to = i;
        fwd.default_outcomes = congested(base);
        mdp.add_edge(std::move(fwd));
        LabeledMdp::Edge back;
        back.from = i;
        back.to = i - 1;
        back.default_outcomes = congested(base);
        mdp.add_edge(std::move(back));
    }
    return mdp;
}

} // namespace trp
