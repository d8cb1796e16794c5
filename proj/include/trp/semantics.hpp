#pragma once

#include <optional>

#include "trp/formula.hpp"
#include "trp/timed_word.hpp"

namespace trp {

// ── MITL satisfaction and temporal robustness ────────────────────────────────
//
// characteristic() returns the +/-1 satisfaction indicator of a formula on a
// timed word at an integer time; robustness() the signed maximal time shift
// that preserves it.  Evaluation is a bottom-up sweep computing each
// subformula's value on the whole time grid, so robustness scans cost no
// more than one evaluation.

/// Range of the inner conjunct of Until.  ExcludeEnd quantifies the left
/// operand over [t, t'-1] and matches the MILP encoding; IncludeEnd uses the
/// closed range [t, t'].
enum class UntilSemantics : std::uint8_t { ExcludeEnd, IncludeEnd };

/// What to do when a temporal window reaches beyond the evaluation domain.
/// Truncate drops the out-of-range points (a conjunction over the missing
/// points is vacuously true, a disjunction loses them); Strict raises
/// OutOfHorizonError because the word does not determine the value.
enum class WindowPolicy : std::uint8_t { Truncate, Strict };

struct EvalOptions {
    UntilSemantics until = UntilSemantics::ExcludeEnd;
    WindowPolicy windows = WindowPolicy::Truncate;
    /// Extends the evaluation domain below the word's first sample by this
    /// many steps, with no labels holding there.  Right robustness at t = 0
    /// is degenerate without it; the MILP realizes the same extension with
    /// fictive zero-valued state variables on negative times.
    int negative_padding = 0;
    /// Upper end of the evaluation domain.  Defaults to the word's last
    /// sample time; larger values extend the domain by label persistence.
    std::optional<int> horizon;
};

/// Satisfaction indicator chi in {+1, -1} of f on w at time t.
/// Throws OutOfHorizonError when t lies outside the evaluation domain, or,
/// under WindowPolicy::Strict, when a temporal window leaves it.
int characteristic(const Formula& f, const TimedWord& w, int t,
                   const EvalOptions& opts = {});

/// Signed temporal robustness at time t: chi times the largest tau such that
/// chi is constant on [t-tau, t] (Right), [t, t+tau] (Left), or both
/// (Combined).  Shifts are truncated at the evaluation domain.
int robustness(const Formula& f, const TimedWord& w, int t, RobustnessVariant variant,
               const EvalOptions& opts = {});

/// Priority-weighted sum of per-task robustness at t = 0.
double weighted_objective(const TaskSet& tasks, const TimedWord& w,
                          RobustnessVariant variant, const EvalOptions& opts = {});

} // namespace trp
