#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "trp/instances.hpp"
#include "trp/mdp.hpp"
#include "trp/semantics.hpp"
#include "trp/vwts.hpp"

using namespace trp;

namespace {

// Fig. 2 right-hand system, weights authored from the Example-1 arithmetic.
Vwts example_vwts() {
    const char* text = R"JSON({
      "states": [
        {"id": "s00", "labels": ["lab"]},
        {"id": "s01", "labels": []},
        {"id": "s02", "labels": ["exit"]},
        {"id": "s10", "labels": []},
        {"id": "s11", "labels": []},
        {"id": "s12", "labels": ["off1"]}
      ],
      "initial": "s02",
      "edges": [
        {"from": "s02", "to": "s01", "bidirectional": true,
         "weights": [{"from_t": 0, "to_t": 2, "w": 3}], "default": 2},
        {"from": "s01", "to": "s00", "bidirectional": true, "weight": 1},
        {"from": "s00", "to": "s10", "bidirectional": true, "weight": 1},
        {"from": "s10", "to": "s11", "bidirectional": true, "weight": 1},
        {"from": "s11", "to": "s12", "bidirectional": true,
         "weights": [{"from_t": 4, "to_t": 8, "w": 6}], "default": 4}
      ]
    })JSON";
    return Vwts::from_json(nlohmann::json::parse(text));
}

Path example_path(const Vwts& ts) {
    Path p;
    for (const char* name : {"s02", "s01", "s00", "s10", "s11", "s12"})
        p.states.push_back(ts.state_id(name));
    return p;
}

} // namespace

TEST_CASE("example 1: time sequence and timed word") {
    const Vwts ts = example_vwts();
    const Path p = example_path(ts);
    const TimeSequence seq = time_sequence(ts, p, 12);
    CHECK(seq.times == std::vector<int>{0, 3, 4, 5, 6, 12});

    const TimedWord w = timed_word(ts, p, 12);
    REQUIRE(w.entries.size() == 6);
    CHECK(w.entries[0].labels == std::set<std::string>{"exit"});
    CHECK(w.entries[1].labels.empty());
    CHECK(w.entries[2].labels == std::set<std::string>{"lab"});
    CHECK(w.entries[5].labels == std::set<std::string>{"off1"});
    CHECK(w.labels_at(1) == std::set<std::string>{"exit"});
    CHECK(w.labels_at(2) == std::set<std::string>{"exit"});
    CHECK(characteristic(make_globally({1, 2}, make_atom("exit")), w, 0) == +1);
}

TEST_CASE("vwts edge and horizon errors") {
    const Vwts ts = example_vwts();
    Path bad;
    bad.states = {ts.state_id("s02"), ts.state_id("s12")};
    CHECK_THROWS_AS(time_sequence(ts, bad, 12), ModelError);
    const Path p = example_path(ts);
    CHECK_THROWS_AS(time_sequence(ts, p, 11), OutOfHorizonError);

    Path single;
    single.states = {ts.state_id("s02")};
    CHECK(time_sequence(ts, single, 5).times == std::vector<int>{0});
}

TEST_CASE("adjacency includes the implicit self-loop") {
    const Vwts ts = example_vwts();
    const int s02 = ts.state_id("s02");
    const auto adj = ts.adjacency(s02);
    CHECK(std::count(adj.begin(), adj.end(), s02) == 1);
    CHECK(std::count(adj.begin(), adj.end(), ts.state_id("s01")) == 1);
    CHECK(ts.delta(s02, 7, s02) == 1);
    CHECK(ts.delta(s02, 0, ts.state_id("s01")) == 3);
    CHECK(ts.delta(s02, 3, ts.state_id("s01")) == 2); // default outside the window
    CHECK_THROWS_AS(ts.delta(s02, 0, ts.state_id("s12")), ModelError);
}

TEST_CASE("random vwts: time sequence matches an independent fold") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        VwtsGenOptions opts;
        opts.num_states = rng.uniform_int(2, 5);
        const Vwts ts = random_vwts(rng, opts);
        // random walk of bounded length
        Path p;
        p.states.push_back(ts.initial());
        int t = 0;
        for (int step = 0; step < 6; ++step) {
            const auto adj = ts.adjacency(p.states.back());
            const int next = adj[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(adj.size()) - 1))];
            t += ts.delta(p.states.back(), t, next);
            if (t > 40) break;
            p.states.push_back(next);
        }
        const TimeSequence seq = time_sequence(ts, p, 40);
        int expect = 0;
        for (std::size_t k = 0; k + 1 < p.states.size(); ++k) {
            expect += ts.delta(p.states[k], expect, p.states[k + 1]);
            CHECK(seq.times[k + 1] == expect);
        }
        for (std::size_t k = 1; k < seq.times.size(); ++k)
            CHECK(seq.times[k] > seq.times[k - 1]);
        const TimedWord w = timed_word(ts, p, 40);
        for (std::size_t k = 0; k < w.entries.size(); ++k)
            CHECK(w.entries[k].time == seq.times[k]);
    }
}

TEST_CASE("mdp validation") {
    std::vector<std::string> names{"x", "y"};
    std::vector<std::set<std::string>> labels{{"a"}, {}};
    LabeledMdp mdp(names, labels, 0);
    LabeledMdp::Edge e;
    e.from = 0;
    e.to = 1;
    e.default_outcomes = {{1, 0.5}, {2, 0.25}};
    CHECK_THROWS_AS(mdp.add_edge(e), ModelError); // mass 0.75
    e.default_outcomes = {{1, 0.5}, {0, 0.5}};
    CHECK_THROWS_AS(mdp.add_edge(e), ModelError); // zero duration
    e.default_outcomes = {{1, 0.5}, {2, 0.5}};
    mdp.add_edge(e);
    CHECK(mdp.outcomes(0, 3, 1) != nullptr);
    CHECK(mdp.outcomes(1, 3, 0) == nullptr);
    // wait is synthesized
    CHECK(mdp.action_outcomes(1, 0, 1).size() == 1);
    CHECK(mdp.action_outcomes(1, 0, 1)[0].dt == 1);
    CHECK_THROWS_AS(mdp.action_outcomes(1, 0, 0), ModelError);
}

TEST_CASE("history tree: single chain for a deterministic wait") {
    std::vector<std::string> names{"x"};
    std::vector<std::set<std::string>> labels{{"a"}};
    const LabeledMdp mdp(names, labels, 0);
    const HistoryTree tree = HistoryTree::unroll(mdp, 3, 3);
    // chain x@0 -> x@1 -> x@2 -> x@3
    CHECK(tree.size() == 4);
    const auto steps = reachable_histories(tree, 3);
    CHECK(steps[0].size() == 1);
    CHECK(steps[3].size() == 1);
    const auto trace = tree.trace(3);
    REQUIRE(trace.size() == 4);
    CHECK(trace.back() == std::pair<int, int>{0, 3});
}

TEST_CASE("history tree matches an independent BFS enumeration") {
    Rng rng(99);
    for (int i = 0; i < 20; ++i) {
        MdpGenOptions opts;
        opts.num_states = rng.uniform_int(2, 3);
        opts.horizon = rng.uniform_int(3, 5);
        const LabeledMdp mdp = random_mdp(rng, opts);
        const HistoryTree tree = HistoryTree::unroll(mdp, opts.horizon, opts.horizon);

        // BFS oracle: expand (state, time) traces independently
        struct Item {
            int state, time;
        };
        long long count = 1;
        std::vector<Item> frontier{{mdp.initial(), 0}};
        while (!frontier.empty()) {
            std::vector<Item> next;
            for (const auto& item : frontier) {
                if (item.time >= opts.horizon) continue;
                for (int target : mdp.enabled_actions(item.state, item.time)) {
                    std::set<int> arrivals;
                    for (const auto& o : mdp.action_outcomes(item.state, item.time, target))
                        arrivals.insert(std::min(item.time + o.dt, opts.horizon));
                    for (int at : arrivals) {
                        next.push_back({target, at});
                        ++count;
                    }
                }
            }
            frontier = std::move(next);
        }
        CHECK(count == tree.size());

        // every leaf reaches the horizon exactly
        for (int leaf : tree.leaves()) CHECK(tree.node(leaf).time == opts.horizon);

        // outcome probabilities per (node, action) sum to one
        for (int id = 0; id < tree.size(); ++id) {
            if (tree.absorbed(id)) continue;
            std::map<int, double> mass;
            for (int child : tree.node(id).children)
                mass[tree.node(child).action_from_parent] += tree.child_prob(child);
            for (const auto& [target, p] : mass) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("terminal reward: axis cases") {
    std::vector<std::string> names{"x", "y"};
    std::vector<std::set<std::string>> labels{{}, {"goal"}};
    LabeledMdp mdp(names, labels, 0);
    LabeledMdp::Edge e;
    e.from = 0;
    e.to = 1;
    e.default_outcomes = {{2, 1.0}};
    mdp.add_edge(e);
    const HistoryTree tree = HistoryTree::unroll(mdp, 4, 4);

    TaskSet zero;
    zero.tasks.push_back({make_eventually({0, 3}, make_atom("goal")), 0.0});
    RewardOptions opts{RobustnessVariant::Right, 2, UntilSemantics::ExcludeEnd};
    for (int leaf : tree.leaves()) CHECK(terminal_reward(zero, tree, leaf, opts) == 0.0);

    // permuting tasks leaves the reward invariant
    TaskSet two;
    two.tasks.push_back({make_eventually({0, 3}, make_atom("goal")), 2.0});
    two.tasks.push_back({make_globally({0, 1}, make_not(make_atom("goal"))), 1.0});
    TaskSet swapped;
    swapped.tasks.push_back(two.tasks[1]);
    swapped.tasks.push_back(two.tasks[0]);
    for (int leaf : tree.leaves())
        CHECK(terminal_reward(two, tree, leaf, opts) ==
              terminal_reward(swapped, tree, leaf, opts));
}

TEST_CASE("reachable_histories: zero steps") {
    std::vector<std::string> names{"x"};
    std::vector<std::set<std::string>> labels{{}};
    const LabeledMdp mdp(names, labels, 0);
    const HistoryTree tree = HistoryTree::unroll(mdp, 2, 2);
    const auto steps = reachable_histories(tree, 0);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0] == std::vector<int>{0});
}

TEST_CASE("unroll node budget") {
    Rng rng(7);
    MdpGenOptions opts;
    opts.num_states = 3;
    opts.horizon = 8;
    const LabeledMdp mdp = random_mdp(rng, opts);
    UnrollLimits limits;
    limits.max_nodes = 10;
    CHECK_THROWS_AS(HistoryTree::unroll(mdp, 8, 8, limits), ResourceLimitError);
}
