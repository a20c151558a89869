#include "masp/transform.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>

namespace masp {

namespace {

std::atomic<unsigned long> fresh_counter{0};

std::vector<Term> tuple_vars(int arity, const std::string& stem) {
    std::vector<Term> out;
    out.reserve(static_cast<size_t>(arity));
    for (int i = 0; i < arity; ++i) out.push_back(Term::variable(stem + std::to_string(i + 1)));
    return out;
}

// p <= q as the conjunction of per-symbol implications forall x (p(x) -> q(x)).
// Either side may be a predicate variable.
using PredOrVar = std::variant<PredicateSymbol, PredicateVariable>;

FormulaPtr applied(const PredOrVar& p, const std::vector<Term>& args) {
    if (p.index() == 0) return mk_atom(std::get<PredicateSymbol>(p), args);
    return mk_predvar_atom(std::get<PredicateVariable>(p), args);
}

int arity_of(const PredOrVar& p) {
    return p.index() == 0 ? std::get<PredicateSymbol>(p).arity
                          : std::get<PredicateVariable>(p).arity;
}

FormulaPtr leq(const std::vector<PredOrVar>& ps, const std::vector<PredOrVar>& qs) {
    std::vector<FormulaPtr> conj;
    for (size_t i = 0; i < ps.size(); ++i) {
        int ar = arity_of(ps[i]);
        auto vars = tuple_vars(ar, "V");
        FormulaPtr body = mk_implies(applied(ps[i], vars), applied(qs[i], vars));
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = mk_forall(it->text, body);
        conj.push_back(body);
    }
    return mk_conjunction(conj);
}

}  // namespace

PredicateVariable fresh_predicate_variable(const PredicateSymbol& base) {
    std::string name = base.name;
    for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    name += "__" + std::to_string(fresh_counter.fetch_add(1) + 1);
    return PredicateVariable{name, base.arity};
}

FormulaPtr star(const FormulaPtr& f, const StarContext& ctx) {
    switch (f->kind) {
        case FormulaKind::bottom:
        case FormulaKind::equal: return f;
        case FormulaKind::atom: {
            auto it = ctx.mapping.find(f->pred);
            if (it == ctx.mapping.end()) return f;
            return mk_predvar_atom(it->second, f->args);
        }
        case FormulaKind::conj: return mk_and(star(f->lhs, ctx), star(f->rhs, ctx));
        case FormulaKind::disj: return mk_or(star(f->lhs, ctx), star(f->rhs, ctx));
        case FormulaKind::implies:
            return mk_and(mk_implies(star(f->lhs, ctx), star(f->rhs, ctx)), f);
        case FormulaKind::forall: return mk_forall(f->bound, star(f->lhs, ctx));
        case FormulaKind::exists: return mk_exists(f->bound, star(f->lhs, ctx));
        case FormulaKind::predvar_atom:
        case FormulaKind::forall_so:
        case FormulaKind::exists_so:
            throw error("star transform requires a first-order formula");
    }
    return f;
}

FormulaPtr sm(const std::vector<PredicateSymbol>& p, const FormulaPtr& f) {
    if (p.empty()) return f;
    auto ps = canonical_predicates(p);
    if (ps.size() != p.size()) throw error("intensional tuple contains duplicates");

    StarContext ctx;
    std::vector<PredOrVar> us, syms;
    for (const auto& s : ps) {
        PredicateVariable u = fresh_predicate_variable(s);
        ctx.mapping[s] = u;
        us.emplace_back(u);
        syms.emplace_back(s);
    }

    // (U < p) = (U <= p) & not (p <= U)
    FormulaPtr less = mk_and(leq(us, syms), mk_not(leq(syms, us)));
    FormulaPtr body = mk_and(less, star(f, ctx));
    for (auto it = ps.rbegin(); it != ps.rend(); ++it)
        body = mk_exists_so(ctx.mapping.at(*it), body);
    return mk_and(f, mk_not(body));
}

FormulaPtr hide(const std::vector<PredicateSymbol>& h, const FormulaPtr& f) {
    if (h.empty()) return f;
    auto hs = canonical_predicates(h);
    RenameMap m;
    std::vector<PredicateVariable> vars;
    for (const auto& s : hs) {
        PredicateVariable v = fresh_predicate_variable(s);
        m[s] = v;
        vars.push_back(v);
    }
    FormulaPtr body = rename_predicates(f, m);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = mk_exists_so(*it, body);
    return body;
}

FormulaPtr phi(const DefModule& m) { return sm(m.intensional, rules_formula(m)); }

namespace {

// union over members of their free predicates; for a def-module the free
// predicates of sm(q, F) are exactly those of F
std::vector<PredicateSymbol> member_frees(const ModularProgram& p) {
    std::vector<PredicateSymbol> u;
    for (const auto& m : p.members) {
        auto fs = m.is_def() ? predicates_of(m.def()) : free_predicates(m.sub());
        u.insert(u.end(), fs.begin(), fs.end());
    }
    return canonical_predicates(std::move(u));
}

}  // namespace

std::vector<PredicateSymbol> hidden_at(const ModularProgram& p) {
    std::vector<PredicateSymbol> hidden;
    for (const auto& s : member_frees(p))
        if (!std::binary_search(p.public_preds.begin(), p.public_preds.end(), s))
            hidden.push_back(s);
    return hidden;
}

std::vector<PredicateSymbol> free_predicates(const ModularProgram& p) {
    std::vector<PredicateSymbol> free;
    for (const auto& s : member_frees(p))
        if (std::binary_search(p.public_preds.begin(), p.public_preds.end(), s))
            free.push_back(s);
    return free;
}

FormulaPtr phi(const ModularProgram& p) {
    std::vector<FormulaPtr> conj;
    for (const auto& m : p.members) conj.push_back(m.is_def() ? phi(m.def()) : phi(m.sub()));
    return hide(hidden_at(p), mk_conjunction(conj));
}

namespace {

bool contains_defmod(const std::vector<DefModule>& haystack, const DefModule& needle) {
    return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

bool occurs_in(const ModularProgram& p, const ModularProgram& target) {
    if (p == target) return true;
    for (const auto& m : p.members)
        if (!m.is_def() && occurs_in(m.sub(), target)) return true;
    return false;
}

}  // namespace

namespace {

// contributions of p's members with the target's def-modules removed;
// members overlapping the target only partially are descended into without
// re-hiding (their locals stay free so the context can be inspected)
void phi_minus_walk(const ModularProgram& p, const std::vector<DefModule>& target_mods,
                    std::vector<FormulaPtr>& conj) {
    for (const auto& m : p.members) {
        if (m.is_def()) {
            if (!contains_defmod(target_mods, m.def())) conj.push_back(phi(m.def()));
            continue;
        }
        auto member_mods = defmods(m.sub());
        bool overlaps =
            std::any_of(member_mods.begin(), member_mods.end(),
                        [&](const DefModule& d) { return contains_defmod(target_mods, d); });
        if (!overlaps)
            conj.push_back(phi(m.sub()));
        else
            phi_minus_walk(m.sub(), target_mods, conj);
    }
}

}  // namespace

FormulaPtr phi_minus(const ModularProgram& p, const ModularProgram& target) {
    if (!occurs_in(p, target)) throw error("target module does not occur in the program");
    std::vector<FormulaPtr> conj;
    phi_minus_walk(p, defmods(target), conj);
    return mk_conjunction(conj);
}

FormulaPtr rules_conjunction(const ModularProgram& p) {
    std::vector<FormulaPtr> conj;
    for (const auto& d : defmods(p)) {
        for (const auto& r : d.rules) conj.push_back(rule_to_formula(r));
    }
    return mk_conjunction(conj);
}

}  // namespace masp
