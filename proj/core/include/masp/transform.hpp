// The stable-model operator, hidden-predicate quantification and the
// recursive module semantics Phi.
//
//   sm(p, F)   =  F & not existsP U ((U < p) & star(F))
//   hide(h, F) =  existsP H ( F with h replaced by H )
//   phi((q:F)) =  sm(q, conjunction of F's rule formulas)
//   phi(<S,M>) =  hide(free predicates of the member conjunction not in S,
//                      conjunction of phi(M_i))
//
// U < p is expanded at transform time into (U <= p) & not (p <= U) with
// <= the conjunction of per-symbol implications, so the produced formula
// is self-contained.

#pragma once

#include "masp/ast.hpp"

namespace masp {

struct StarContext {
    // injective, arity-preserving; predicate variables must be fresh for the
    // formula being transformed
    std::map<PredicateSymbol, PredicateVariable> mapping;
};

/// Fresh predicate variable for a symbol: uppercased name plus a global
/// counter suffix ("in/2" -> "IN__7").  Printing strips the suffix.
PredicateVariable fresh_predicate_variable(const PredicateSymbol& base);

/// The star transform.  Atoms over mapped symbols become predicate-variable
/// atoms, implications are strengthened with their original copy, everything
/// else maps through.  Throws on second-order input.
FormulaPtr star(const FormulaPtr& f, const StarContext& ctx);

/// SM operator with intensional tuple p; empty p returns f unchanged.
FormulaPtr sm(const std::vector<PredicateSymbol>& p, const FormulaPtr& f);

/// Existentially quantifies h away (fresh predicate variables).
FormulaPtr hide(const std::vector<PredicateSymbol>& h, const FormulaPtr& f);

FormulaPtr phi(const DefModule& m);
FormulaPtr phi(const ModularProgram& p);

/// Conjunction of phi(M) over top-level members M of p whose def-modules do
/// not include any def-module of target; top for an empty conjunction.
/// Throws if target does not occur in p.
FormulaPtr phi_minus(const ModularProgram& p, const ModularProgram& target);

/// Conjunction of all def-module rule formulas of p (flat first-order).
FormulaPtr rules_conjunction(const ModularProgram& p);

/// Hidden symbols chosen by phi at this program node (free predicates of the
/// member conjunction that are not public), canonically sorted.
std::vector<PredicateSymbol> hidden_at(const ModularProgram& p);

/// Free predicate symbols of phi(p), canonically sorted.
std::vector<PredicateSymbol> free_predicates(const ModularProgram& p);

}  // namespace masp
