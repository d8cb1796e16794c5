#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "trp/errors.hpp"

namespace trp {

// ── MITL abstract syntax ─────────────────────────────────────────────────────
//
// Formulas are immutable trees shared through shared_ptr<const FormulaNode>.
// Temporal operators carry a closed integer interval [lo, hi] with
// 0 <= lo <= hi.  Construction goes through the factory functions below,
// which enforce arity and interval invariants.

enum class Op : std::uint8_t {
    True,
    Atom,
    Not,
    And,
    Or,
    Globally,
    Eventually,
    Until,
};

const char* op_name(Op op) noexcept;

struct Interval {
    int lo = 0;
    int hi = 0;
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    Op op = Op::True;
    std::string atom;              // Op::Atom only
    Interval window;               // temporal operators only
    std::vector<Formula> children; // arity checked by factories
};

Formula make_true();
Formula make_atom(std::string name);
Formula make_not(Formula child);
Formula make_and(std::vector<Formula> children);  // >= 2 children
Formula make_or(std::vector<Formula> children);   // >= 2 children
Formula make_globally(Interval window, Formula child);
Formula make_eventually(Interval window, Formula child);
Formula make_until(Interval window, Formula lhs, Formula rhs);

bool structurally_equal(const Formula& a, const Formula& b);

/// Maximal time offset any subformula evaluation can reach from a query at
/// t = 0: atoms contribute 0, boolean nodes the max over children, bounded
/// temporal operators add their upper interval bound.
int formula_horizon(const Formula& f);

/// Number of nodes in the tree (used for model-size accounting).
int formula_size(const Formula& f);

void collect_atoms(const Formula& f, std::set<std::string>& out);

// ── Tasks ────────────────────────────────────────────────────────────────────

/// One MITL task with its nonnegative priority weight.
struct Task {
    Formula formula;
    double priority = 1.0;
};

/// A prioritized task set; planning objectives sum priority-weighted
/// robustness over its members.
struct TaskSet {
    std::vector<Task> tasks;

    /// Max formula horizon over all tasks, the lower bound any planning
    /// horizon must strictly exceed.
    int max_horizon() const;

    void validate() const; // nonempty, priorities >= 0
};

/// Which temporal-robustness value a planning run optimizes.
/// Right looks backward in time ([t - tau, t]), Left forward ([t, t + tau]),
/// Combined requires constancy in both directions.
enum class RobustnessVariant : std::uint8_t { Right, Left, Combined };

const char* variant_name(RobustnessVariant v) noexcept;
RobustnessVariant variant_from_name(const std::string& name);

} // namespace trp
