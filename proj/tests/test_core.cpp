#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "trp/instances.hpp"
#include "trp/oracle.hpp"
#include "trp/parser.hpp"
#include "trp/semantics.hpp"

using namespace trp;

namespace {

TimedWord word_of(std::initializer_list<std::pair<std::set<std::string>, int>> entries) {
    std::vector<TimedWord::Entry> out;
    for (const auto& [labels, t] : entries) out.push_back({labels, t});
    return TimedWord::from_entries(std::move(out));
}

// the Example-1 word: ({exit},0),({},3),({lab},4),({},5),({},6),({off1},12)
TimedWord example_word() {
    return word_of({{{"exit"}, 0}, {{}, 3}, {{"lab"}, 4}, {{}, 5}, {{}, 6}, {{"off1"}, 12}});
}

} // namespace

TEST_CASE("timed word label persistence") {
    const TimedWord w = example_word();
    CHECK(w.labels_at(0) == std::set<std::string>{"exit"});
    CHECK(w.labels_at(1) == std::set<std::string>{"exit"});
    CHECK(w.labels_at(2) == std::set<std::string>{"exit"});
    CHECK(w.labels_at(3).empty());
    CHECK(w.labels_at(4) == std::set<std::string>{"lab"});
    CHECK(w.labels_at(12) == std::set<std::string>{"off1"});
    CHECK(w.labels_at(20) == std::set<std::string>{"off1"}); // persists past the last sample
    CHECK(w.horizon() == 12);
    CHECK_THROWS_AS(
        TimedWord::from_entries({{{}, 3}, {{}, 3}}), ModelError);
}

TEST_CASE("characteristic function basics") {
    const TimedWord w = example_word();
    const Formula g_exit = make_globally({1, 2}, make_atom("exit"));
    CHECK(characteristic(g_exit, w, 0) == +1); // the Example-1 claim
    CHECK(characteristic(make_true(), w, 0) == +1);
    CHECK(characteristic(make_true(), w, 7) == +1);
    CHECK(characteristic(make_not(make_atom("lab")), w, 4) == -1);
    CHECK(characteristic(make_atom("lab"), w, 4) == +1);
    CHECK(characteristic(make_atom("lab"), w, 5) == -1);
    CHECK_THROWS_AS(characteristic(g_exit, w, 13), OutOfHorizonError);
    CHECK_THROWS_AS(characteristic(g_exit, w, -1), OutOfHorizonError);
    // beyond-horizon windows error under Strict, truncate otherwise
    EvalOptions strict;
    strict.windows = WindowPolicy::Strict;
    CHECK_THROWS_AS(characteristic(g_exit, w, 11, strict), OutOfHorizonError);
    CHECK(characteristic(g_exit, w, 11) == -1);
}

TEST_CASE("formula horizon recursion") {
    CHECK(formula_horizon(make_atom("x")) == 0);
    CHECK(formula_horizon(make_eventually({2, 5}, make_globally({0, 3}, make_atom("x")))) ==
          8);
    CHECK(formula_horizon(make_until({1, 4}, make_atom("a"), make_atom("b"))) == 4);
    CHECK(formula_horizon(make_true()) == 0);
}

TEST_CASE("robustness window-length extremes") {
    // always satisfied on a word of length T: Left robustness +T at t=0
    const int T = 9;
    const TimedWord w = word_of({{{"a"}, 0}, {{"a"}, T}});
    const Formula f = make_atom("a");
    CHECK(robustness(f, w, 0, RobustnessVariant::Left) == T);
    const Formula never = make_atom("b");
    CHECK(robustness(never, w, 0, RobustnessVariant::Left) == -T);
    // padding extends the right-robustness domain below zero
    EvalOptions pad;
    pad.negative_padding = 4;
    CHECK(robustness(never, w, 0, RobustnessVariant::Right, pad) == -4);
    CHECK(robustness(f, w, 0, RobustnessVariant::Right, pad) == 0); // no labels before 0
}

TEST_CASE("weighted objective") {
    const TimedWord w = word_of({{{"a"}, 0}, {{"a"}, 5}});
    TaskSet tasks;
    tasks.tasks.push_back({make_atom("a"), 0.0});
    CHECK(weighted_objective(tasks, w, RobustnessVariant::Left) == 0.0);
    tasks.tasks.clear();
    tasks.tasks.push_back({make_atom("a"), 1.0});
    tasks.tasks.push_back({make_atom("b"), 1.0});
    const double expect = robustness(make_atom("a"), w, 0, RobustnessVariant::Left) +
                          robustness(make_atom("b"), w, 0, RobustnessVariant::Left);
    CHECK(weighted_objective(tasks, w, RobustnessVariant::Left) == expect);
}

TEST_CASE("semantic invariants on random instances") {
    Rng rng(2024);
    const std::vector<std::string> atoms{"a", "b", "c"};
    FormulaGenOptions fopts;
    fopts.max_depth = 3;
    for (int i = 0; i < 200; ++i) {
        const Formula f = random_formula(rng, atoms, fopts);
        const TimedWord w = random_word(rng, atoms, 7, 12);
        const int t = rng.uniform_int(w.start_time(), w.horizon());
        EvalOptions opts;
        opts.negative_padding = rng.uniform_int(0, 3);

        // negation duality
        CHECK(characteristic(make_not(f), w, t, opts) == -characteristic(f, w, t, opts));

        // eventually/globally duality
        const Interval win{rng.uniform_int(0, 2), rng.uniform_int(2, 4)};
        const Formula ev = make_eventually(win, f);
        const Formula dual = make_not(make_globally(win, make_not(f)));
        CHECK(characteristic(ev, w, t, opts) == characteristic(dual, w, t, opts));

        // robustness sign agreement and shift soundness
        for (const auto variant : {RobustnessVariant::Right, RobustnessVariant::Left,
                                   RobustnessVariant::Combined}) {
            const int eta = robustness(f, w, t, variant, opts);
            const int chi = characteristic(f, w, t, opts);
            if (eta != 0) CHECK((eta > 0) == (chi > 0));
            if (variant == RobustnessVariant::Left && eta > 0)
                for (int q = t; q <= std::min(t + eta, w.horizon()); ++q)
                    CHECK(characteristic(f, w, q, opts) == chi);
            if (variant == RobustnessVariant::Combined) {
                const int r = robustness(f, w, t, RobustnessVariant::Right, opts);
                const int l = robustness(f, w, t, RobustnessVariant::Left, opts);
                CHECK(std::abs(eta) == std::min(std::abs(r), std::abs(l)));
            }
        }
    }
}

TEST_CASE("evaluator matches the literal shift-scan oracle") {
    Rng rng(77);
    const std::vector<std::string> atoms{"a", "b", "c"};
    FormulaGenOptions fopts;
    fopts.max_depth = 3;
    for (int i = 0; i < 300; ++i) {
        const Formula f = random_formula(rng, atoms, fopts);
        const TimedWord w = random_word(rng, atoms, 8, 14);
        EvalOptions opts;
        opts.until = rng.bernoulli(0.5) ? UntilSemantics::ExcludeEnd
                                        : UntilSemantics::IncludeEnd;
        opts.negative_padding = rng.uniform_int(0, 4);
        if (rng.bernoulli(0.3)) opts.horizon = w.horizon() + rng.uniform_int(0, 3);
        const int t = rng.uniform_int(w.start_time(), w.horizon());
        const auto variant = static_cast<RobustnessVariant>(rng.uniform_int(0, 2));
        CHECK(characteristic(f, w, t, opts) == oracle::char_value(f, w, t, opts));
        CHECK(robustness(f, w, t, variant, opts) ==
              oracle::shift_scan_robustness(f, w, t, variant, opts));
    }
}

TEST_CASE("parser: spec examples") {
    const Formula g = parse_formula("G[1,2] \"exit\"");
    CHECK(g->op == Op::Globally);
    CHECK(g->window.lo == 1);
    CHECK(g->window.hi == 2);
    CHECK(g->children[0]->op == Op::Atom);
    CHECK(g->children[0]->atom == "exit");

    const Formula a = parse_formula("\"a\"");
    CHECK(a->op == Op::Atom);

    const Formula combo = parse_formula("(\"a\" U[0,5] \"b\") & F[2,4] !\"c\"");
    const Formula expect = make_and(
        {make_until({0, 5}, make_atom("a"), make_atom("b")),
         make_eventually({2, 4}, make_not(make_atom("c")))});
    CHECK(structurally_equal(combo, expect));
}

TEST_CASE("parser: errors") {
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("G[2,1] \"a\""), ParseError);
    CHECK_THROWS_AS(parse_formula("\"a\" &"), ParseError);
    CHECK_THROWS_AS(parse_formula("G \"a\""), ParseError);
    CHECK_THROWS_AS(parse_formula("x"), ParseError);
    CHECK_THROWS_AS(parse_formula("\"a\" \"b\""), ParseError);
    CHECK_THROWS_AS(parse_formula("(\"a\""), ParseError);
}

TEST_CASE("printer round-trip on spec forms") {
    CHECK(print_formula(make_atom("a")) == "\"a\"");
    CHECK(print_formula(make_not(make_atom("a"))) == "!\"a\"");
    // nested same-operator children keep parentheses
    const Formula nested = make_and({make_and({make_atom("a"), make_atom("b")}),
                                     make_atom("c")});
    CHECK(structurally_equal(parse_formula(print_formula(nested)), nested));
    const Formula flat = make_and({make_atom("a"), make_atom("b"), make_atom("c")});
    CHECK(structurally_equal(parse_formula(print_formula(flat)), flat));
    CHECK(!structurally_equal(nested, flat));
}

TEST_CASE("printer round-trip on random formulas") {
    Rng rng(5150);
    const std::vector<std::string> atoms{"a", "b", "c", "kitc", "off_1"};
    FormulaGenOptions fopts;
    fopts.max_depth = 8;
    fopts.max_interval = 100;
    fopts.max_arity = 3;
    for (int i = 0; i < 500; ++i) {
        const Formula f = random_formula(rng, atoms, fopts);
        const Formula back = parse_formula(print_formula(f));
        CHECK(structurally_equal(f, back));
    }
}

TEST_CASE("task file parsing") {
    std::istringstream in("# comment line\n"
                          "1 ; F[0,12] \"off1\"\n"
                          "\n"
                          "2.5 ; G[1,2] \"exit\"\n");
    const TaskSet tasks = parse_task_set(in);
    REQUIRE(tasks.tasks.size() == 2);
    CHECK(tasks.tasks[0].priority == 1.0);
    CHECK(tasks.tasks[1].priority == 2.5);
    CHECK(tasks.tasks[1].formula->op == Op::Globally);

    std::istringstream bad("-1 ; \"a\"\n");
    CHECK_THROWS_AS(parse_task_set(bad), ParseError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_task_set(empty), ModelError);
}

TEST_CASE("until strictness flag") {
    // phi1 fails exactly at the witness point: the closed convention rejects,
    // the encoding convention accepts
    const TimedWord w = word_of({{{"a"}, 0}, {{"b"}, 2}});
    const Formula u = make_until({2, 2}, make_atom("a"), make_atom("b"));
    EvalOptions open;
    open.until = UntilSemantics::ExcludeEnd;
    EvalOptions closed;
    closed.until = UntilSemantics::IncludeEnd;
    CHECK(characteristic(u, w, 0, open) == +1);
    CHECK(characteristic(u, w, 0, closed) == -1);
}
