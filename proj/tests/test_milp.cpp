#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "trp/milp.hpp"
#include "trp/rng.hpp"
#include "trp/solver.hpp"

using namespace trp;

TEST_CASE("model validation") {
    MilpModel m;
    const int x = m.add_var("x", VarKind::Continuous, 0, 5);
    CHECK_THROWS_AS(m.add_var("bad", VarKind::Binary, 0, 2), ModelError);
    CHECK_THROWS_AS(m.add_con("c", term(42), ConSense::Le, 1), ModelError);
    m.add_con("ok", term(x, 2.0), ConSense::Le, 4);
    m.validate();
}

TEST_CASE("simplex: bounded toy") {
    // max x s.t. x <= 3, x >= 0
    MilpModel m;
    const int x = m.add_var("x", VarKind::Continuous, 0, 100);
    m.add_con("cap", term(x), ConSense::Le, 3);
    m.objective.add(x, 1.0);
    const SolveResult r = solve_lp(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("simplex: infeasible pair") {
    MilpModel m;
    const int x = m.add_var("x", VarKind::Continuous, 0, 10);
    m.add_con("le", term(x), ConSense::Le, 0);
    m.add_con("ge", term(x), ConSense::Ge, 1);
    m.objective.add(x, 1.0);
    CHECK(solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("simplex: equality rows and negative bounds") {
    // max x + y  s.t.  x + y = 2, x - y >= -1, -3 <= x,y <= 3
    MilpModel m;
    const int x = m.add_var("x", VarKind::Continuous, -3, 3);
    const int y = m.add_var("y", VarKind::Continuous, -3, 3);
    m.add_con("sum", term(x) += term(y), ConSense::Eq, 2);
    LinExpr diff = term(x);
    diff.add(y, -1.0);
    m.add_con("diff", diff, ConSense::Ge, -1);
    m.objective.add(x, 1.0);
    m.objective.add(y, 1.0);
    const SolveResult r = solve_lp(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-9));
    std::string why;
    CHECK(check_feasible(m, r.assignment, 1e-9, false, 1e-6, &why));
}

namespace {

// enumerate vertices of random box-and-rows LPs by brute force over active sets
double vertex_enumeration_optimum(const MilpModel& m) {
    // collect all hyperplanes: variable bounds and constraint boundaries;
    // 2-variable instances only, enumerate pairwise intersections
    REQUIRE(m.vars.size() == 2);
    std::vector<std::array<double, 3>> planes; // a0 x + a1 y = c
    for (int j = 0; j < 2; ++j) {
        planes.push_back({j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, m.vars[j].lo});
        planes.push_back({j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, m.vars[j].hi});
    }
    for (const auto& c : m.cons) {
        std::array<double, 3> p{0, 0, c.rhs};
        for (const auto& t : c.expr.terms) p[static_cast<std::size_t>(t.var)] = t.coef;
        planes.push_back(p);
    }
    double best = -kInf;
    for (std::size_t i = 0; i < planes.size(); ++i)
        for (std::size_t j = i + 1; j < planes.size(); ++j) {
            const double det = planes[i][0] * planes[j][1] - planes[i][1] * planes[j][0];
            if (std::abs(det) < 1e-12) continue;
            const double x = (planes[i][2] * planes[j][1] - planes[i][1] * planes[j][2]) / det;
            const double y = (planes[i][0] * planes[j][2] - planes[i][2] * planes[j][0]) / det;
            std::vector<double> point{x, y};
            if (check_feasible(m, point, 1e-7, false, 1e-6))
                best = std::max(best, eval_expr(m.objective, point));
        }
    return best;
}

} // namespace

TEST_CASE("simplex matches vertex enumeration on random 2-var LPs") {
    Rng rng(4242);
    int solved = 0;
    for (int i = 0; i < 120; ++i) {
        MilpModel m;
        m.add_var("x", VarKind::Continuous, -5, 5);
        m.add_var("y", VarKind::Continuous, -5, 5);
        const int rows = rng.uniform_int(1, 5);
        for (int r = 0; r < rows; ++r) {
            LinExpr e;
            e.add(0, rng.uniform_int(-3, 3));
            e.add(1, rng.uniform_int(-3, 3));
            m.add_con("r" + std::to_string(r), e,
                      rng.bernoulli(0.5) ? ConSense::Le : ConSense::Ge,
                      rng.uniform_int(-6, 6));
        }
        m.objective.add(0, rng.uniform_int(-4, 4));
        m.objective.add(1, rng.uniform_int(-4, 4));
        const SolveResult r = solve_lp(m);
        if (r.status == SolveStatus::Infeasible) {
            CHECK(vertex_enumeration_optimum(m) == -kInf);
            continue;
        }
        REQUIRE(r.status == SolveStatus::Optimal);
        ++solved;
        CHECK(r.objective == doctest::Approx(vertex_enumeration_optimum(m)).epsilon(1e-8));
    }
    CHECK(solved > 40);
}

TEST_CASE("branch and bound: knapsack vs exhaustive enumeration") {
    Rng rng(9001);
    for (int inst = 0; inst < 15; ++inst) {
        const int n = rng.uniform_int(4, 10);
        std::vector<int> weight(n), value(n);
        for (int i = 0; i < n; ++i) {
            weight[i] = rng.uniform_int(1, 9);
            value[i] = rng.uniform_int(1, 9);
        }
        const int cap = rng.uniform_int(5, 25);
        MilpModel m;
        LinExpr wsum;
        for (int i = 0; i < n; ++i) {
            const int x = m.add_var("x" + std::to_string(i), VarKind::Binary, 0, 1);
            wsum.add(x, weight[i]);
            m.objective.add(x, value[i]);
        }
        m.add_con("cap", wsum, ConSense::Le, cap);

        double best = 0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            int w = 0, v = 0;
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) {
                    w += weight[i];
                    v += value[i];
                }
            if (w <= cap) best = std::max(best, static_cast<double>(v));
        }
        const SolveResult r = solve_milp(m);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.objective == doctest::Approx(best).epsilon(1e-9));
        std::string why;
        CHECK(check_feasible(m, r.assignment, 1e-9, true, 1e-6, &why));
        CHECK(r.objective <= r.bound + 1e-9);
    }
}

TEST_CASE("branch and bound: integral relaxation means zero nodes") {
    MilpModel m;
    const int x = m.add_var("x", VarKind::Integer, 0, 7);
    m.add_con("cap", term(x), ConSense::Le, 5);
    m.objective.add(x, 1.0);
    const SolveResult r = solve_milp(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(5.0));
    CHECK(r.nodes == 0);
}

TEST_CASE("solver determinism") {
    Rng rng(17);
    MilpModel m;
    for (int i = 0; i < 6; ++i) m.add_var("x" + std::to_string(i), VarKind::Binary, 0, 1);
    for (int r = 0; r < 4; ++r) {
        LinExpr e;
        for (int i = 0; i < 6; ++i) e.add(i, rng.uniform_int(-3, 3));
        m.add_con("r" + std::to_string(r), e, ConSense::Le, rng.uniform_int(1, 6));
    }
    for (int i = 0; i < 6; ++i) m.objective.add(i, rng.uniform_int(-3, 5));
    const SolveResult a = solve_milp(m);
    const SolveResult b = solve_milp(m);
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.nodes == b.nodes);
    CHECK(a.assignment == b.assignment);
}

TEST_CASE("mps round-trip") {
    MilpModel m;
    m.name = "rt";
    const int x = m.add_var("x", VarKind::Binary, 0, 1);
    const int y = m.add_var("y", VarKind::Integer, -2, 9);
    const int z = m.add_var("z", VarKind::Continuous, 0.5, kInf);
    LinExpr e;
    e.add(x, 2.0);
    e.add(y, -1.5);
    m.add_con("c1", e, ConSense::Le, 4);
    m.add_con("c2", term(y) += term(z), ConSense::Eq, 3);
    m.add_con("c3", term(z, 0.25), ConSense::Ge, -1);
    m.objective.add(x, 1.0);
    m.objective.add(z, 2.0);

    const std::string text = to_mps(m);
    std::istringstream in(text);
    const MilpModel back = read_mps(in);
    REQUIRE(back.vars.size() == m.vars.size());
    REQUIRE(back.cons.size() == m.cons.size());
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
        CHECK((back.vars[i].kind != VarKind::Continuous) ==
              (m.vars[i].kind != VarKind::Continuous));
        CHECK(back.vars[i].lo == m.vars[i].lo);
        CHECK(back.vars[i].hi == m.vars[i].hi);
    }
    // second export of the re-imported model is byte-identical
    CHECK(to_mps(back) == text);

    // the two models solve to the same optimum
    const SolveResult ra = solve_milp(m);
    const SolveResult rb = solve_milp(back);
    REQUIRE(ra.status == SolveStatus::Optimal);
    REQUIRE(rb.status == SolveStatus::Optimal);
    CHECK(ra.objective == doctest::Approx(rb.objective).epsilon(1e-9));
}

TEST_CASE("mps fixed-format field columns") {
    MilpModel m;
    const int x = m.add_var("x", VarKind::Continuous, 0, 1);
    m.add_con("c", term(x), ConSense::Le, 1);
    m.objective.add(x, 1.0);
    const std::string text = to_mps(m);
    std::istringstream in(text);
    std::string line;
    bool saw_column_line = false;
    while (std::getline(in, line)) {
        if (line.rfind("    X0000001", 0) == 0) {
            saw_column_line = true;
            // fields 2 and 3 start at 1-based columns 5 and 15
            CHECK(line.substr(4, 8).substr(0, 8) == "X0000001");
            CHECK(line[14] != ' ');
        }
    }
    CHECK(saw_column_line);
}

TEST_CASE("mps rejects RANGES") {
    const char* text = "NAME t\nROWS\n N OBJ\n L C1\nCOLUMNS\n    X1 C1 1.0\nRANGES\n"
                       "    R C1 1.0\nENDATA\n";
    std::istringstream in(text);
    CHECK_THROWS_AS(read_mps(in), ParseError);
}
