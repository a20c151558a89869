// Semantics-preserving rewrites for def-modules: denial extraction, Clark
// normal form and completion for tight modules, the choice-rule reversal,
// and circumscription (minimal-model enumeration) for negation-free rules.

#pragma once

#include "masp/ast.hpp"
#include "masp/interpretation.hpp"

namespace masp {

enum class ReductionKind { denials, completion, choice, circumscription };

struct ReductionResult {
    ReductionKind kind = ReductionKind::completion;
    bool applicable = false;
    FormulaPtr residual;  // null when inapplicable
    std::string reason;   // why not, when inapplicable
};

/// Splits m into its non-denial part and the conjunction of its universally
/// closed denials read classically (top when there are none).
std::pair<DefModule, FormulaPtr> extract_denials(const DefModule& m);

/// One implication forall X.. (G_p -> p(X..)) per intensional predicate;
/// predicates with no rules get G_p = bot; denials are conjoined unchanged.
/// Throws on disjunctive heads or non-simple modules.
FormulaPtr clark_normal_form(const DefModule& m);

/// Clark normal form with each definition strengthened to both directions;
/// applicable iff the module is tight.
ReductionResult completion(const DefModule& m);

/// For a def-module consisting of one choice rule {p(X..)} :- G, the
/// first-order reversal forall X.. (p(X..) -> G).
ReductionResult reduce_choice(const DefModule& m);

/// Applicability marker for circumscription (all rules negation-free).
ReductionResult circumscription_applicability(const DefModule& m);

/// Minimal models of m's rules over dom extending fixed: models whose
/// intensional extents admit no per-symbol sub-extent (one strict) that
/// still satisfies the rules.  Direct enumeration, no star transform.
/// Throws when a rule uses negation, naming it.
std::vector<Interpretation> circumscribe(const DefModule& m, const Domain& dom,
                                         const Interpretation& fixed);

}  // namespace masp
