// Module replacement and bounded checking of contextual strong equivalence:
// two programs are strongly equivalent w.r.t. a context theory Gamma exactly
// when Gamma entails phi(a) <-> phi(b) over Herbrand interpretations.  The
// checker enumerates interpretations over the shared free signature up to a
// domain bound; counterexamples are conclusive, "equivalent" verdicts are
// bound-relative.

#pragma once

#include "masp/ast.hpp"
#include "masp/interpretation.hpp"

namespace masp {

struct ContextTheory {
    std::vector<FormulaPtr> sentences;  // closed, first-order
};

struct EquivVerdict {
    enum class Status { equivalent_up_to_bound, counterexample };
    enum class Direction { holds_in_first_only, holds_in_second_only };

    Status status = Status::equivalent_up_to_bound;
    Domain bound;
    std::optional<Interpretation> witness;
    std::optional<Direction> direction;
};

/// p with every occurrence of old_mod replaced by new_mod.  Throws when
/// old_mod does not occur in p.
ModularProgram replace(const ModularProgram& p, const ModularProgram& old_mod,
                       const ModularProgram& new_mod);

/// Enumerates Herbrand interpretations over the shared free-predicate
/// signature of phi(a)/phi(b) at the given bound, by increasing atom count;
/// the first Gamma-model on which the two phi formulas disagree becomes the
/// counterexample.  Throws when the free signatures differ.
EquivVerdict strong_equiv_bounded(const ModularProgram& a, const ModularProgram& b,
                                  const ContextTheory& gamma, const Domain& bound,
                                  int jobs = 1);

/// Compares canonicalized answer-set sets; a counterexample is the smallest
/// answer set in the symmetric difference.
EquivVerdict same_answer_sets(const ModularProgram& a, const ModularProgram& b,
                              const std::optional<DefModule>& inst, const SolveOptions& opts);

}  // namespace masp
