#include "trp/milp.hpp"

#include <algorithm>
#include <cmath>

namespace trp {

LinExpr& LinExpr::operator+=(const LinExpr& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    constant += o.constant;
    return *this;
}

void LinExpr::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
    std::vector<LinTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const LinTerm& t) { return t.coef == 0.0; }),
                 merged.end());
    terms = std::move(merged);
}

LinExpr term(int var, double coef) {
    LinExpr e;
    e.add(var, coef);
    return e;
}

int MilpModel::add_var(std::string name, VarKind kind, double lo, double hi) {
    if (lo > hi) throw ModelError("variable '" + name + "' has lo > hi");
    if (kind == VarKind::Binary && (lo < 0.0 || hi > 1.0))
        throw ModelError("binary variable '" + name + "' must have bounds within [0,1]");
    vars.push_back({std::move(name), kind, lo, hi});
    return static_cast<int>(vars.size()) - 1;
}

void MilpModel::add_con(std::string name, LinExpr expr, ConSense sense, double rhs) {
    expr.normalize();
    rhs -= expr.constant;
    expr.constant = 0.0;
    for (const auto& t : expr.terms)
        if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
            throw ModelError("constraint '" + name + "' references undeclared variable");
    cons.push_back({std::move(name), std::move(expr), sense, rhs});
}

void MilpModel::add_eq(std::string name, LinExpr lhs, LinExpr rhs) {
    for (const auto& t : rhs.terms) lhs.add(t.var, -t.coef);
    lhs.constant -= rhs.constant;
    add_con(std::move(name), std::move(lhs), ConSense::Eq, 0.0);
}

int MilpModel::num_integral() const {
    int n = 0;
    for (const auto& v : vars)
        if (v.kind != VarKind::Continuous) ++n;
    return n;
}

void MilpModel::validate() const {
    for (const auto& v : vars) {
        if (v.lo > v.hi) throw ModelError("variable '" + v.name + "' has lo > hi");
        if (v.kind == VarKind::Binary && (v.lo < 0.0 || v.hi > 1.0))
            throw ModelError("binary variable '" + v.name + "' bounds outside [0,1]");
    }
    for (const auto& c : cons)
        for (const auto& t : c.expr.terms)
            if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
                throw ModelError("constraint '" + c.name + "' references undeclared variable");
    for (const auto& t : objective.terms)
        if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
            throw ModelError("objective references undeclared variable");
}

double eval_expr(const LinExpr& e, const std::vector<double>& x) {
    double v = e.constant;
    for (const auto& t : e.terms) v += t.coef * x.at(static_cast<std::size_t>(t.var));
    return v;
}

bool check_feasible(const MilpModel& m, const std::vector<double>& x, double tol,
                    bool check_integrality, double int_tol, std::string* why) {
    auto explain = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (x.size() != m.vars.size()) return explain("assignment size mismatch");
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
        const auto& v = m.vars[i];
        if (x[i] < v.lo - tol || x[i] > v.hi + tol)
            return explain("bound violated on " + v.name);
        if (check_integrality && v.kind != VarKind::Continuous &&
            std::abs(x[i] - std::round(x[i])) > int_tol)
            return explain("integrality violated on " + v.name);
    }
    for (const auto& c : m.cons) {
        const double lhs = eval_expr(c.expr, x);
        const bool ok = c.sense == ConSense::Le   ? lhs <= c.rhs + tol
                        : c.sense == ConSense::Ge ? lhs >= c.rhs - tol
                                                  : std::abs(lhs - c.rhs) <= tol;
        if (!ok) return explain("constraint violated: " + c.name);
    }
    return true;
}

} // namespace trp
