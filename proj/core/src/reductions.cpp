#include "masp/reductions.hpp"

#include <algorithm>

#include "ground.hpp"
#include "masp/analysis.hpp"
#include "masp/evaluator.hpp"
#include "masp/printer.hpp"

namespace masp {

std::pair<DefModule, FormulaPtr> extract_denials(const DefModule& m) {
    DefModule kept;
    kept.intensional = m.intensional;
    std::vector<FormulaPtr> denials;
    for (const auto& r : m.rules) {
        if (r.is_denial())
            denials.push_back(rule_to_formula(r));
        else
            kept.rules.push_back(r);
    }
    return {std::move(kept), mk_conjunction(denials)};
}

// ── Clark normal form ────────────────────────────────────────────────────────

namespace {

std::string canonical_head_var(int i) {
    static const char* names[] = {"X", "Y", "Z"};
    if (i < 3) return names[i];
    return "X" + std::to_string(i + 1);
}

Atom substitute(const Atom& a, const std::map<std::string, std::string>& sub) {
    Atom out = a;
    for (auto& t : out.args)
        if (t.is_variable()) {
            auto it = sub.find(t.text);
            if (it != sub.end()) t.text = it->second;
        }
    return out;
}

Term substitute(const Term& t, const std::map<std::string, std::string>& sub) {
    if (!t.is_variable()) return t;
    auto it = sub.find(t.text);
    return it == sub.end() ? t : Term::variable(it->second);
}

// Body of one rule as a formula under a variable substitution; the choice
// double negation is included only when requested.
FormulaPtr body_formula(const Rule& r, const std::map<std::string, std::string>& sub,
                        bool include_choice_nn) {
    std::vector<FormulaPtr> conj;
    if (r.choice && include_choice_nn) {
        Atom h = substitute(r.head[0], sub);
        conj.push_back(mk_not(mk_not(mk_atom(h.pred, h.args))));
    }
    for (const auto& a : r.positive_body) {
        Atom s = substitute(a, sub);
        conj.push_back(mk_atom(s.pred, s.args));
    }
    for (const auto& a : r.negative_body) {
        Atom s = substitute(a, sub);
        conj.push_back(mk_not(mk_atom(s.pred, s.args)));
    }
    for (const auto& a : r.double_negated_body) {
        Atom s = substitute(a, sub);
        conj.push_back(mk_not(mk_not(mk_atom(s.pred, s.args))));
    }
    for (const auto& c : r.comparisons) {
        FormulaPtr eq = mk_equal(substitute(c.lhs, sub), substitute(c.rhs, sub));
        conj.push_back(c.op == Comparison::Op::eq ? eq : mk_not(eq));
    }
    return mk_conjunction(conj);
}

// The definition disjunct contributed by one p-rule, over canonical head
// variables.  Distinct-variable heads are renamed onto the canonical names;
// other head shapes use explicit equalities.
FormulaPtr rule_disjunct(const Rule& r, const PredicateSymbol& p, bool include_choice_nn) {
    const Atom& head = r.head[0];
    std::vector<std::string> canon;
    for (int i = 0; i < p.arity; ++i) canon.push_back(canonical_head_var(i));

    bool distinct_vars = true;
    std::set<std::string> seen;
    for (const auto& t : head.args)
        if (!t.is_variable() || !seen.insert(t.text).second) distinct_vars = false;

    auto rvars = rule_variables(r);
    std::map<std::string, std::string> sub;
    std::set<std::string> used(canon.begin(), canon.end());

    std::vector<std::string> remaining;
    if (distinct_vars) {
        for (size_t i = 0; i < head.args.size(); ++i) sub[head.args[i].text] = canon[i];
        for (const auto& v : rvars) {
            if (sub.count(v)) continue;
            std::string name = v;
            for (int k = 2; used.count(name); ++k) name = v + std::to_string(k);
            used.insert(name);
            sub[v] = name;
            remaining.push_back(name);
        }
        FormulaPtr g = body_formula(r, sub, include_choice_nn);
        for (auto it = remaining.rbegin(); it != remaining.rend(); ++it) g = mk_exists(*it, g);
        return g;
    }

    // general shape: equalities X_i = t_i plus the body, all rule variables
    // existentially quantified
    for (const auto& v : rvars) {
        std::string name = v;
        for (int k = 2; used.count(name); ++k) name = v + std::to_string(k);
        used.insert(name);
        sub[v] = name;
        remaining.push_back(name);
    }
    std::vector<FormulaPtr> conj;
    for (size_t i = 0; i < head.args.size(); ++i)
        conj.push_back(mk_equal(Term::variable(canon[i]), substitute(head.args[i], sub)));
    FormulaPtr body = body_formula(r, sub, include_choice_nn);
    if (!is_top(body)) conj.push_back(body);
    FormulaPtr g = mk_conjunction(conj);
    for (auto it = remaining.rbegin(); it != remaining.rend(); ++it) g = mk_exists(*it, g);
    return g;
}

FormulaPtr definition_of(const DefModule& m, const PredicateSymbol& p, bool iff) {
    std::vector<FormulaPtr> disjuncts;
    for (const auto& r : m.rules) {
        if (r.is_denial() || r.head[0].pred != p) continue;
        if (r.head.size() > 1) throw error("Clark normal form requires non-disjunctive heads");
        disjuncts.push_back(rule_disjunct(r, p, true));
    }
    FormulaPtr g;
    if (disjuncts.empty()) {
        g = mk_bottom();
    } else {
        g = disjuncts[0];
        for (size_t i = 1; i < disjuncts.size(); ++i) g = mk_or(g, disjuncts[i]);
    }
    std::vector<Term> canon;
    for (int i = 0; i < p.arity; ++i) canon.push_back(Term::variable(canonical_head_var(i)));
    FormulaPtr head = mk_atom(p, canon);
    FormulaPtr body = iff ? mk_and(mk_implies(g, head), mk_implies(head, g)) : mk_implies(g, head);
    for (int i = p.arity - 1; i >= 0; --i) body = mk_forall(canonical_head_var(i), body);
    return body;
}

FormulaPtr clark_like(const DefModule& m, bool iff) {
    for (const auto& r : m.rules)
        for (const auto& h : r.head)
            if (!std::binary_search(m.intensional.begin(), m.intensional.end(), h.pred))
                throw error("module is not simple: head predicate " + h.pred.to_string());
    std::vector<FormulaPtr> conj;
    for (const auto& p : m.intensional) conj.push_back(definition_of(m, p, iff));
    for (const auto& r : m.rules)
        if (r.is_denial()) conj.push_back(rule_to_formula(r));
    return mk_conjunction(conj);
}

}  // namespace

FormulaPtr clark_normal_form(const DefModule& m) { return clark_like(m, false); }

ReductionResult completion(const DefModule& m) {
    ReductionResult res;
    res.kind = ReductionKind::completion;
    if (!is_tight(m)) {
        res.reason = "not tight (cyclic dependency in " + m.label() + ")";
        return res;
    }
    try {
        res.residual = clark_like(m, true);
        res.applicable = true;
    } catch (const error& e) {
        res.reason = e.what();
    }
    return res;
}

ReductionResult reduce_choice(const DefModule& m) {
    ReductionResult res;
    res.kind = ReductionKind::choice;
    std::vector<const Rule*> defining;
    for (const auto& r : m.rules)
        if (!r.is_denial()) defining.push_back(&r);
    if (defining.size() != 1 || m.rules.size() != 1) {
        res.reason = "module is not a single choice rule";
        return res;
    }
    const Rule& r = *defining[0];
    if (!r.choice) {
        res.reason = "module is not a single choice rule";
        return res;
    }
    if (m.intensional.size() != 1 || r.head[0].pred != m.intensional[0]) {
        res.reason = "choice head does not match the intensional tuple";
        return res;
    }
    std::set<std::string> seen;
    for (const auto& t : r.head[0].args)
        if (!t.is_variable() || !seen.insert(t.text).second) {
            res.reason = "choice head arguments are not distinct variables";
            return res;
        }
    if (!is_tight(m)) {
        res.reason = "not tight (" + m.intensional[0].to_string() + " depends on itself)";
        return res;
    }

    const PredicateSymbol& p = r.head[0].pred;
    FormulaPtr g = rule_disjunct(r, p, /*include_choice_nn=*/false);
    std::vector<Term> canon;
    for (int i = 0; i < p.arity; ++i) canon.push_back(Term::variable(canonical_head_var(i)));
    FormulaPtr body = mk_implies(mk_atom(p, canon), g);
    for (int i = p.arity - 1; i >= 0; --i) body = mk_forall(canonical_head_var(i), body);
    res.residual = body;
    res.applicable = true;
    return res;
}

// ── circumscription ──────────────────────────────────────────────────────────

namespace {

const Rule* negation_in(const DefModule& m) {
    for (const auto& r : m.rules)
        if (!r.negative_body.empty() || !r.double_negated_body.empty() || r.choice ||
            r.is_denial())
            return &r;
    return nullptr;
}

}  // namespace

ReductionResult circumscription_applicability(const DefModule& m) {
    ReductionResult res;
    res.kind = ReductionKind::circumscription;
    if (const Rule* r = negation_in(m)) {
        res.reason = "rule uses negation or is a denial: " + print_rule(*r);
        return res;
    }
    res.applicable = true;
    res.residual = rules_formula(m);
    return res;
}

std::vector<Interpretation> circumscribe(const DefModule& m, const Domain& dom,
                                         const Interpretation& fixed) {
    if (const Rule* r = negation_in(m))
        throw error("circumscription requires negation-free rules; offending rule: " +
                    print_rule(*r));

    FormulaPtr f = rules_formula(m);
    auto ps = canonical_predicates(m.intensional);

    auto space = std::make_shared<detail::GroundSpace>(dom);
    std::vector<std::pair<PredicateSymbol, int>> slots;
    std::vector<std::uint32_t> p_atoms;
    for (const auto& p : ps) {
        int slot = space->pred_slot(p);
        slots.emplace_back(p, slot);
        const auto& s = space->slot(slot);
        for (std::uint32_t i = 0; i < s.count; ++i) p_atoms.push_back(s.base + i);
    }
    if (p_atoms.size() > 63)
        throw resource_limit_error("intensional signature spans more than 63 ground atoms");
    detail::GroundFormula g(space, f, {});

    detail::Bits bits(space->atom_count());
    space->load(bits, fixed);
    detail::EvalCache cache;

    auto write = [&](std::uint64_t mask) {
        for (size_t i = 0; i < p_atoms.size(); ++i) {
            if ((mask >> i) & 1u)
                bits.set(p_atoms[i]);
            else
                bits.reset(p_atoms[i]);
        }
    };

    std::vector<Interpretation> out;
    const std::uint64_t total = std::uint64_t(1) << p_atoms.size();
    for (std::uint64_t candidate = 0; candidate < total; ++candidate) {
        write(candidate);
        if (!g.eval(bits, cache)) continue;

        // a smaller model of the same rules disproves minimality
        std::vector<int> set_positions;
        for (size_t i = 0; i < p_atoms.size(); ++i)
            if ((candidate >> i) & 1u) set_positions.push_back(static_cast<int>(i));
        const std::uint64_t full_sub = (std::uint64_t(1) << set_positions.size()) - 1;
        bool witness =
            detail::masks_by_popcount(static_cast<int>(set_positions.size()),
                                      [&](std::uint64_t sub) {
                                          if (sub == full_sub) return false;
                                          std::uint64_t scattered = 0;
                                          for (size_t i = 0; i < set_positions.size(); ++i)
                                              if ((sub >> i) & 1u)
                                                  scattered |= std::uint64_t(1)
                                                               << set_positions[i];
                                          write(scattered);
                                          return g.eval(bits, cache);
                                      });
        if (witness) continue;
        write(candidate);
        Interpretation model;
        model.domain = dom;
        for (const auto& [p, slot] : slots) {
            auto ts = space->extract(bits, slot);
            if (!ts.empty()) model.extents[p] = std::move(ts);
        }
        for (const auto& [q, ts] : fixed.extents)
            if (!ts.empty()) model.extents[q] = ts;
        out.push_back(std::move(model));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace masp
