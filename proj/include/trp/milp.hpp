#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "trp/errors.hpp"

namespace trp {

// ── Solver-agnostic MILP intermediate representation ─────────────────────────

enum class VarKind : std::uint8_t { Continuous, Integer, Binary };
enum class ConSense : std::uint8_t { Le, Eq, Ge };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinTerm {
    int var = -1;
    double coef = 0.0;
};

/// Sparse linear expression; repeated variables are allowed while building
/// and merged by normalize().
struct LinExpr {
    std::vector<LinTerm> terms;
    double constant = 0.0;

    LinExpr& add(int var, double coef) {
        terms.push_back({var, coef});
        return *this;
    }
    LinExpr& operator+=(const LinExpr& o);
    void normalize(); // merge duplicates, drop zeros, sort by var id
};

LinExpr term(int var, double coef = 1.0);

struct MilpModel {
    struct Var {
        std::string name;
        VarKind kind = VarKind::Continuous;
        double lo = 0.0;
        double hi = 0.0;
    };
    struct Con {
        std::string name;
        LinExpr expr;
        ConSense sense = ConSense::Le;
        double rhs = 0.0;
    };

    std::string name = "model";
    std::vector<Var> vars;
    std::vector<Con> cons;
    LinExpr objective; // sense: maximize

    int add_var(std::string name, VarKind kind, double lo, double hi);
    void add_con(std::string name, LinExpr expr, ConSense sense, double rhs);
    /// lhs == rhs-expression, as one Eq row (constants fold into the rhs).
    void add_eq(std::string name, LinExpr lhs, LinExpr rhs);

    int num_integral() const; // Integer + Binary count
    /// Checks variable references and binary bounds; throws ModelError.
    void validate() const;
};

/// Replays an assignment against every constraint and bound.  Independent of
/// any solver arithmetic: plain loops over the stored rows.
bool check_feasible(const MilpModel& m, const std::vector<double>& x, double tol,
                    bool check_integrality, double int_tol, std::string* why = nullptr);

double eval_expr(const LinExpr& e, const std::vector<double>& x);

// ── MPS text format ──────────────────────────────────────────────────────────
//
// Fixed-format field layout (fields at columns 2-3, 5-12, 15-22, 25-36,
// 40-47, 50-61).  Names are generated 8-character identifiers to satisfy the
// fixed-format width limit; an OBJSENSE section records the maximize sense.
// The reader accepts both this writer's output and free-format files.

void write_mps(const MilpModel& m, std::ostream& out);
std::string to_mps(const MilpModel& m);
MilpModel read_mps(std::istream& in);

} // namespace trp
