#include "trp/formula.hpp"

#include <algorithm>

namespace trp {

const char* op_name(Op op) noexcept {
    switch (op) {
    case Op::True: return "TRUE";
    case Op::Atom: return "atom";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Globally: return "G";
    case Op::Eventually: return "F";
    case Op::Until: return "U";
    }
    return "?";
}

namespace {

void check_window(const Interval& w) {
    if (w.lo < 0 || w.hi < 0)
        throw ModelError("temporal interval bounds must be nonnegative");
    if (w.lo > w.hi)
        throw ModelError("temporal interval has lo > hi");
}

Formula node(FormulaNode&& n) {
    return std::make_shared<const FormulaNode>(std::move(n));
}

} // namespace

Formula make_true() { return node({Op::True, {}, {}, {}}); }

Formula make_atom(std::string name) {
    if (name.empty()) throw ModelError("atom name must be nonempty");
    return node({Op::Atom, std::move(name), {}, {}});
}

Formula make_not(Formula child) {
    if (!child) throw ModelError("null child");
    return node({Op::Not, {}, {}, {std::move(child)}});
}

namespace {
Formula make_nary(Op op, std::vector<Formula> children) {
    if (children.size() < 2)
        throw ModelError(std::string(op_name(op)) + " needs at least 2 children");
    for (const auto& c : children)
        if (!c) throw ModelError("null child");
    return node({op, {}, {}, std::move(children)});
}
} // namespace

Formula make_and(std::vector<Formula> children) { return make_nary(Op::And, std::move(children)); }
Formula make_or(std::vector<Formula> children) { return make_nary(Op::Or, std::move(children)); }

Formula make_globally(Interval window, Formula child) {
    check_window(window);
    if (!child) throw ModelError("null child");
    return node({Op::Globally, {}, window, {std::move(child)}});
}

Formula make_eventually(Interval window, Formula child) {
    check_window(window);
    if (!child) throw ModelError("null child");
    return node({Op::Eventually, {}, window, {std::move(child)}});
}

Formula make_until(Interval window, Formula lhs, Formula rhs) {
    check_window(window);
    if (!lhs || !rhs) throw ModelError("null child");
    return node({Op::Until, {}, window, {std::move(lhs), std::move(rhs)}});
}

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->atom != b->atom) return false;
    if (a->window.lo != b->window.lo || a->window.hi != b->window.hi) return false;
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    return true;
}

int formula_horizon(const Formula& f) {
    switch (f->op) {
    case Op::True:
    case Op::Atom:
        return 0;
    case Op::Not:
    case Op::And:
    case Op::Or: {
        int h = 0;
        for (const auto& c : f->children) h = std::max(h, formula_horizon(c));
        return h;
    }
    case Op::Globally:
    case Op::Eventually:
        return f->window.hi + formula_horizon(f->children[0]);
    case Op::Until:
        return f->window.hi +
               std::max(formula_horizon(f->children[0]), formula_horizon(f->children[1]));
    }
    return 0;
}

int formula_size(const Formula& f) {
    int n = 1;
    for (const auto& c : f->children) n += formula_size(c);
    return n;
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
    if (f->op == Op::Atom) out.insert(f->atom);
    for (const auto& c : f->children) collect_atoms(c, out);
}

int TaskSet::max_horizon() const {
    int h = 0;
    for (const auto& t : tasks) h = std::max(h, formula_horizon(t.formula));
    return h;
}

void TaskSet::validate() const {
    if (tasks.empty()) throw ModelError("task set is empty");
    for (const auto& t : tasks) {
        if (!t.formula) throw ModelError("task has null formula");
        if (t.priority < 0) throw ModelError("task priority must be nonnegative");
    }
}

const char* variant_name(RobustnessVariant v) noexcept {
    switch (v) {
    case RobustnessVariant::Right: return "right";
    case RobustnessVariant::Left: return "left";
    case RobustnessVariant::Combined: return "combined";
    }
    return "?";
}

RobustnessVariant variant_from_name(const std::string& name) {
    if (name == "right") return RobustnessVariant::Right;
    if (name == "left") return RobustnessVariant::Left;
    if (name == "combined") return RobustnessVariant::Combined;
    throw ParseError("unknown robustness variant '" + name + "'");
}

} // namespace trp
