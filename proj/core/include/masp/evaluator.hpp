// Finite-domain evaluation: grounding of quantifiers over a Herbrand
// domain, classical satisfaction of FO/SO formulas, brute-force stable
// model search (the oracle) and the splitting-ordered answer set
// enumeration for coherent modular programs.

#pragma once

#include "masp/ast.hpp"
#include "masp/interpretation.hpp"

namespace masp {

class resource_limit_error : public error {
public:
    explicit resource_limit_error(const std::string& what) : error(what) {}
};

/// All constants occurring in p and inst, canonically ordered.  Throws when
/// there are none, pointing at the domain override.
Domain herbrand_universe(const ModularProgram& p, const std::optional<DefModule>& inst);

/// Classical truth of a sentence: FO quantifiers range over i.domain, SO
/// quantifiers over all subsets of domain^arity.  Free predicate variables
/// must be covered by so.
bool evaluate(const FormulaPtr& f, const Interpretation& i, const SOAssignment& so = {});

/// All Herbrand interpretations over the given signature and domain that
/// satisfy f, canonically sorted.  jobs > 1 partitions the search space.
std::vector<Interpretation> herbrand_models(const FormulaPtr& f,
                                            const std::vector<PredicateSymbol>& signature,
                                            const Domain& dom, int jobs = 1);

/// Brute-force stable models of a first-order f with intensional tuple p:
/// every extension of `fixed` with p-extents that satisfies f and admits no
/// proper per-symbol sub-tuple satisfying the star transform.  `fixed` must
/// cover exactly pred(f) \ p.
std::vector<Interpretation> naive_stable_models(const FormulaPtr& f,
                                                const std::vector<PredicateSymbol>& p,
                                                const Domain& dom, const Interpretation& fixed);

/// Answer sets of a modular program (optionally joined with an instance),
/// projected onto the public predicates.  The splitting strategy requires a
/// coherent program; the naive strategy runs the oracle on the whole rule
/// conjunction.
std::vector<Interpretation> answer_sets(const ModularProgram& p,
                                        const std::optional<DefModule>& inst,
                                        const SolveOptions& opts);

/// Restriction of i to the symbols in s.
Interpretation project(const Interpretation& i, const std::vector<PredicateSymbol>& s);

/// The program actually solved: inst added as a trailing member of the root,
/// public set replaced by show when given.
ModularProgram join_instance(const ModularProgram& p, const std::optional<DefModule>& inst,
                             const std::optional<std::vector<PredicateSymbol>>& show);

}  // namespace masp
