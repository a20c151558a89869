#pragma once

#include <string>

#include "masp/ast.hpp"

namespace masp {

/// Canonical program text.  Re-parsing yields a structurally equivalent
/// program; implicit def-modules come back as explicit def blocks and the
/// public set is always spelled out via #show.
std::string print_program(const ModularProgram& p);

std::string print_rule(const Rule& r);

/// ASCII formula text ("smf" format): forall X Y (...), exists X (...),
/// existsP R/2 (...) for second-order quantifiers, &, |, ->, not, bot.
/// Bound predicate variables are alpha-normalized to short display names.
std::string print_formula(const FormulaPtr& f);

}  // namespace masp
