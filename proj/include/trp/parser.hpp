#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "trp/formula.hpp"

namespace trp {

// ── Concrete MITL syntax ─────────────────────────────────────────────────────
//
//   formula := until
//   until   := or (U[a,b] or)*          right-associative
//   or      := and ('|' and)*           chains flatten to one n-ary node
//   and     := unary ('&' unary)*       chains flatten to one n-ary node
//   unary   := '!' unary | G[a,b] unary | F[a,b] unary | primary
//   primary := TRUE | '"' ident '"' | '(' formula ')'
//
// Intervals are mandatory on temporal operators and carry nonnegative
// integers with a <= b.  Whitespace is insignificant.

Formula parse_formula(std::string_view text);

/// Canonical text form; parse_formula(print_formula(f)) is structurally
/// equal to f.
std::string print_formula(const Formula& f);

/// Task files: one task per line, `<priority> ; <formula>`, '#' comments and
/// blank lines ignored.
TaskSet parse_task_set(std::istream& in);
TaskSet load_task_file(const std::string& path);

} // namespace trp
