#include "masp/ast.hpp"

#include <algorithm>

namespace masp {

// ── formula constructors ─────────────────────────────────────────────────────

namespace {

FormulaPtr node(FormulaKind k) { return std::make_shared<Formula>(Formula(k)); }

}  // namespace

FormulaPtr mk_bottom() {
    static const FormulaPtr bot = node(FormulaKind::bottom);
    return bot;
}

FormulaPtr mk_top() {
    static const FormulaPtr top = mk_implies(mk_bottom(), mk_bottom());
    return top;
}

FormulaPtr mk_atom(PredicateSymbol pred, std::vector<Term> args) {
    if (static_cast<int>(args.size()) != pred.arity)
        throw error("atom " + pred.to_string() + " given " + std::to_string(args.size()) +
                    " arguments");
    auto f = std::make_shared<Formula>(Formula(FormulaKind::atom));
    f->pred = std::move(pred);
    f->args = std::move(args);
    return f;
}

FormulaPtr mk_predvar_atom(PredicateVariable var, std::vector<Term> args) {
    if (static_cast<int>(args.size()) != var.arity)
        throw error("predicate variable " + var.to_string() + " given " +
                    std::to_string(args.size()) + " arguments");
    auto f = std::make_shared<Formula>(Formula(FormulaKind::predvar_atom));
    f->var = std::move(var);
    f->args = std::move(args);
    return f;
}

FormulaPtr mk_equal(Term a, Term b) {
    auto f = std::make_shared<Formula>(Formula(FormulaKind::equal));
    f->args = {std::move(a), std::move(b)};
    return f;
}

static FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>(Formula(k));
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::conj, std::move(a), std::move(b)); }
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::disj, std::move(a), std::move(b)); }
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::implies, std::move(a), std::move(b)); }
FormulaPtr mk_not(FormulaPtr a) { return mk_implies(std::move(a), mk_bottom()); }

FormulaPtr mk_forall(std::string var, FormulaPtr body) {
    auto f = std::make_shared<Formula>(Formula(FormulaKind::forall));
    f->bound = std::move(var);
    f->lhs = std::move(body);
    return f;
}

FormulaPtr mk_exists(std::string var, FormulaPtr body) {
    auto f = std::make_shared<Formula>(Formula(FormulaKind::exists));
    f->bound = std::move(var);
    f->lhs = std::move(body);
    return f;
}

FormulaPtr mk_forall_so(PredicateVariable var, FormulaPtr body) {
    auto f = std::make_shared<Formula>(Formula(FormulaKind::forall_so));
    f->var = std::move(var);
    f->lhs = std::move(body);
    return f;
}

FormulaPtr mk_exists_so(PredicateVariable var, FormulaPtr body) {
    auto f = std::make_shared<Formula>(Formula(FormulaKind::exists_so));
    f->var = std::move(var);
    f->lhs = std::move(body);
    return f;
}

FormulaPtr mk_conjunction(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_top();
    FormulaPtr acc = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
    return acc;
}

bool is_top(const FormulaPtr& f) {
    return f->kind == FormulaKind::implies && f->lhs->kind == FormulaKind::bottom &&
           f->rhs->kind == FormulaKind::bottom;
}

// ── structural and alpha equality ───────────────────────────────────────────

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FormulaKind::bottom: return true;
        case FormulaKind::atom: return a->pred == b->pred && a->args == b->args;
        case FormulaKind::predvar_atom: return a->var == b->var && a->args == b->args;
        case FormulaKind::equal: return a->args == b->args;
        case FormulaKind::conj:
        case FormulaKind::disj:
        case FormulaKind::implies:
            return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
        case FormulaKind::forall:
        case FormulaKind::exists:
            return a->bound == b->bound && equal(a->lhs, b->lhs);
        case FormulaKind::forall_so:
        case FormulaKind::exists_so:
            return a->var == b->var && equal(a->lhs, b->lhs);
    }
    return false;
}

namespace {

struct AlphaCtx {
    // positional maps for bound variables, pushed/popped along the walk
    std::vector<std::pair<std::string, std::string>> fo;
    std::vector<std::pair<PredicateVariable, PredicateVariable>> so;

    bool term_eq(const Term& a, const Term& b) const {
        if (a.kind != b.kind) return false;
        if (a.is_constant()) return a.text == b.text;
        for (auto it = fo.rbegin(); it != fo.rend(); ++it) {
            if (it->first == a.text || it->second == b.text)
                return it->first == a.text && it->second == b.text;
        }
        return a.text == b.text;  // both free
    }
    bool var_eq(const PredicateVariable& a, const PredicateVariable& b) const {
        for (auto it = so.rbegin(); it != so.rend(); ++it) {
            if (it->first == a || it->second == b) return it->first == a && it->second == b;
        }
        return a == b;  // both free
    }
};

bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b, AlphaCtx& ctx) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FormulaKind::bottom: return true;
        case FormulaKind::atom: {
            if (!(a->pred == b->pred) || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!ctx.term_eq(a->args[i], b->args[i])) return false;
            return true;
        }
        case FormulaKind::predvar_atom: {
            if (!ctx.var_eq(a->var, b->var) || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!ctx.term_eq(a->args[i], b->args[i])) return false;
            return true;
        }
        case FormulaKind::equal:
            return ctx.term_eq(a->args[0], b->args[0]) && ctx.term_eq(a->args[1], b->args[1]);
        case FormulaKind::conj:
        case FormulaKind::disj:
        case FormulaKind::implies:
            return alpha_eq(a->lhs, b->lhs, ctx) && alpha_eq(a->rhs, b->rhs, ctx);
        case FormulaKind::forall:
        case FormulaKind::exists: {
            ctx.fo.emplace_back(a->bound, b->bound);
            bool r = alpha_eq(a->lhs, b->lhs, ctx);
            ctx.fo.pop_back();
            return r;
        }
        case FormulaKind::forall_so:
        case FormulaKind::exists_so: {
            if (a->var.arity != b->var.arity) return false;
            ctx.so.emplace_back(a->var, b->var);
            bool r = alpha_eq(a->lhs, b->lhs, ctx);
            ctx.so.pop_back();
            return r;
        }
    }
    return false;
}

}  // namespace

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
    AlphaCtx ctx;
    return alpha_eq(a, b, ctx);
}

bool contains_so(const FormulaPtr& f) {
    switch (f->kind) {
        case FormulaKind::bottom:
        case FormulaKind::atom:
        case FormulaKind::equal: return false;
        case FormulaKind::predvar_atom:
        case FormulaKind::forall_so:
        case FormulaKind::exists_so: return true;
        case FormulaKind::conj:
        case FormulaKind::disj:
        case FormulaKind::implies: return contains_so(f->lhs) || contains_so(f->rhs);
        case FormulaKind::forall:
        case FormulaKind::exists: return contains_so(f->lhs);
    }
    return false;
}

namespace {

void free_fo_walk(const FormulaPtr& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
    auto add_term = [&](const Term& t) {
        if (!t.is_variable()) return;
        if (std::find(bound.begin(), bound.end(), t.text) != bound.end()) return;
        if (std::find(out.begin(), out.end(), t.text) == out.end()) out.push_back(t.text);
    };
    switch (f->kind) {
        case FormulaKind::bottom: return;
        case FormulaKind::atom:
        case FormulaKind::predvar_atom:
        case FormulaKind::equal:
            for (const auto& t : f->args) add_term(t);
            return;
        case FormulaKind::conj:
        case FormulaKind::disj:
        case FormulaKind::implies:
            free_fo_walk(f->lhs, bound, out);
            free_fo_walk(f->rhs, bound, out);
            return;
        case FormulaKind::forall:
        case FormulaKind::exists:
            bound.push_back(f->bound);
            free_fo_walk(f->lhs, bound, out);
            bound.pop_back();
            return;
        case FormulaKind::forall_so:
        case FormulaKind::exists_so:
            free_fo_walk(f->lhs, bound, out);
            return;
    }
}

void free_pv_walk(const FormulaPtr& f, std::vector<PredicateVariable>& bound,
                  std::set<PredicateVariable>& out) {
    switch (f->kind) {
        case FormulaKind::bottom:
        case FormulaKind::atom:
        case FormulaKind::equal: return;
        case FormulaKind::predvar_atom:
            if (std::find(bound.begin(), bound.end(), f->var) == bound.end()) out.insert(f->var);
            return;
        case FormulaKind::conj:
        case FormulaKind::disj:
        case FormulaKind::implies:
            free_pv_walk(f->lhs, bound, out);
            free_pv_walk(f->rhs, bound, out);
            return;
        case FormulaKind::forall:
        case FormulaKind::exists:
            free_pv_walk(f->lhs, bound, out);
            return;
        case FormulaKind::forall_so:
        case FormulaKind::exists_so:
            bound.push_back(f->var);
            free_pv_walk(f->lhs, bound, out);
            bound.pop_back();
            return;
    }
}

}  // namespace

std::vector<std::string> free_fo_variables(const FormulaPtr& f) {
    std::vector<std::string> bound, out;
    free_fo_walk(f, bound, out);
    return out;
}

std::set<PredicateVariable> free_predicate_variables(const FormulaPtr& f) {
    std::vector<PredicateVariable> bound;
    std::set<PredicateVariable> out;
    free_pv_walk(f, bound, out);
    return out;
}

std::set<std::string> constants_of(const FormulaPtr& f) {
    std::set<std::string> out;
    auto walk = [&](auto&& self, const FormulaPtr& g) -> void {
        for (const auto& t : g->args)
            if (t.is_constant()) out.insert(t.text);
        if (g->lhs) self(self, g->lhs);
        if (g->rhs) self(self, g->rhs);
    };
    walk(walk, f);
    return out;
}

// ── atoms, rules ─────────────────────────────────────────────────────────────

bool Atom::is_ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_constant(); });
}

std::string Atom::to_string() const {
    std::string s = pred.name;
    if (!args.empty()) {
        s += "(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) s += ",";
            s += args[i].text;
        }
        s += ")";
    }
    return s;
}

std::vector<std::string> rule_variables(const Rule& r) {
    std::vector<std::string> out;
    auto add = [&](const Term& t) {
        if (t.is_variable() && std::find(out.begin(), out.end(), t.text) == out.end())
            out.push_back(t.text);
    };
    for (const auto& a : r.head)
        for (const auto& t : a.args) add(t);
    for (const auto& a : r.positive_body)
        for (const auto& t : a.args) add(t);
    for (const auto& a : r.negative_body)
        for (const auto& t : a.args) add(t);
    for (const auto& a : r.double_negated_body)
        for (const auto& t : a.args) add(t);
    for (const auto& c : r.comparisons) {
        add(c.lhs);
        add(c.rhs);
    }
    return out;
}

std::optional<std::string> unsafe_variable(const Rule& r) {
    auto in_positive = [&](const std::string& v) {
        for (const auto& a : r.positive_body)
            for (const auto& t : a.args)
                if (t.is_variable() && t.text == v) return true;
        return false;
    };
    for (const auto& v : rule_variables(r))
        if (!in_positive(v)) return v;
    return std::nullopt;
}

FormulaPtr rule_to_formula(const Rule& r) {
    if (auto v = unsafe_variable(r))
        throw error("unsafe rule: variable " + *v + " does not occur in the positive body");
    if (r.choice && r.head.size() != 1) throw error("choice rule must have exactly one head atom");

    auto atom_formula = [](const Atom& a) {
        return mk_atom(a.pred, a.args);
    };

    std::vector<FormulaPtr> body;
    if (r.choice) body.push_back(mk_not(mk_not(atom_formula(r.head[0]))));
    for (const auto& a : r.positive_body) body.push_back(atom_formula(a));
    for (const auto& a : r.negative_body) body.push_back(mk_not(atom_formula(a)));
    for (const auto& a : r.double_negated_body) body.push_back(mk_not(mk_not(atom_formula(a))));
    for (const auto& c : r.comparisons) {
        FormulaPtr eq = mk_equal(c.lhs, c.rhs);
        body.push_back(c.op == Comparison::Op::eq ? eq : mk_not(eq));
    }

    FormulaPtr head;
    if (r.head.empty()) {
        head = mk_bottom();
    } else {
        head = atom_formula(r.head[0]);
        for (size_t i = 1; i < r.head.size(); ++i) head = mk_or(head, atom_formula(r.head[i]));
    }

    FormulaPtr f = body.empty() ? head : mk_implies(mk_conjunction(body), head);
    auto vars = rule_variables(r);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = mk_forall(*it, f);
    return f;
}

FormulaPtr rules_formula(const DefModule& m) {
    std::vector<FormulaPtr> fs;
    fs.reserve(m.rules.size());
    for (const auto& r : m.rules) fs.push_back(rule_to_formula(r));
    return mk_conjunction(fs);
}

// ── def-modules, programs ───────────────────────────────────────────────────

std::string DefModule::label() const {
    if (intensional.empty()) return "def {}";
    std::string s = "def ";
    for (size_t i = 0; i < intensional.size(); ++i) {
        if (i) s += ",";
        s += intensional[i].to_string();
    }
    return s;
}

ModularProgram::ModularProgram() = default;
ModularProgram::ModularProgram(const ModularProgram&) = default;
ModularProgram::ModularProgram(ModularProgram&&) noexcept = default;
ModularProgram& ModularProgram::operator=(const ModularProgram&) = default;
ModularProgram& ModularProgram::operator=(ModularProgram&&) noexcept = default;
ModularProgram::~ModularProgram() = default;

bool operator==(const ModularProgram& a, const ModularProgram& b) {
    return a.public_preds == b.public_preds && a.members == b.members;
}

bool operator==(const Member& a, const Member& b) {
    if (a.node.index() != b.node.index()) return false;
    if (a.is_def()) return a.def() == b.def();
    return a.sub() == b.sub();
}

namespace {

void collect_defmods(const ModularProgram& p, std::vector<DefModule>& out) {
    for (const auto& m : p.members) {
        if (m.is_def())
            out.push_back(m.def());
        else
            collect_defmods(m.sub(), out);
    }
}

}  // namespace

std::vector<DefModule> defmods(const ModularProgram& p) {
    std::vector<DefModule> out;
    collect_defmods(p, out);
    return out;
}

std::vector<PredicateSymbol> canonical_predicates(std::vector<PredicateSymbol> ps) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

std::vector<PredicateSymbol> intensional_predicates(const ModularProgram& p) {
    std::vector<PredicateSymbol> out;
    for (const auto& d : defmods(p))
        out.insert(out.end(), d.intensional.begin(), d.intensional.end());
    return canonical_predicates(std::move(out));
}

std::vector<PredicateSymbol> predicates_of(const DefModule& m) {
    std::vector<PredicateSymbol> out;
    auto add = [&](const Atom& a) { out.push_back(a.pred); };
    for (const auto& r : m.rules) {
        for (const auto& a : r.head) add(a);
        for (const auto& a : r.positive_body) add(a);
        for (const auto& a : r.negative_body) add(a);
        for (const auto& a : r.double_negated_body) add(a);
    }
    out.insert(out.end(), m.intensional.begin(), m.intensional.end());
    return canonical_predicates(std::move(out));
}

std::vector<PredicateSymbol> predicates_of(const ModularProgram& p) {
    std::vector<PredicateSymbol> out;
    for (const auto& d : defmods(p)) {
        auto ps = predicates_of(d);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return canonical_predicates(std::move(out));
}

std::vector<PredicateSymbol> predicates_of(const FormulaPtr& f) {
    std::vector<PredicateSymbol> out;
    auto walk = [&](auto&& self, const FormulaPtr& g) -> void {
        if (g->kind == FormulaKind::atom) out.push_back(g->pred);
        if (g->lhs) self(self, g->lhs);
        if (g->rhs) self(self, g->rhs);
    };
    walk(walk, f);
    return canonical_predicates(std::move(out));
}

std::set<std::string> constants_of(const DefModule& m) {
    std::set<std::string> out;
    auto add = [&](const std::vector<Term>& ts) {
        for (const auto& t : ts)
            if (t.is_constant()) out.insert(t.text);
    };
    for (const auto& r : m.rules) {
        for (const auto& a : r.head) add(a.args);
        for (const auto& a : r.positive_body) add(a.args);
        for (const auto& a : r.negative_body) add(a.args);
        for (const auto& a : r.double_negated_body) add(a.args);
        for (const auto& c : r.comparisons) {
            if (c.lhs.is_constant()) out.insert(c.lhs.text);
            if (c.rhs.is_constant()) out.insert(c.rhs.text);
        }
    }
    return out;
}

std::set<std::string> constants_of(const ModularProgram& p) {
    std::set<std::string> out;
    for (const auto& d : defmods(p)) {
        auto cs = constants_of(d);
        out.insert(cs.begin(), cs.end());
    }
    return out;
}

// ── predicate renaming ──────────────────────────────────────────────────────

namespace {

void check_arities(const RenameMap& m) {
    for (const auto& [from, to] : m) {
        int to_arity = to.index() == 0 ? std::get<PredicateSymbol>(to).arity
                                       : std::get<PredicateVariable>(to).arity;
        if (from.arity != to_arity)
            throw error("rename target for " + from.to_string() + " has different arity");
    }
}

FormulaPtr rename_walk(const FormulaPtr& f, const RenameMap& m) {
    switch (f->kind) {
        case FormulaKind::bottom:
        case FormulaKind::equal:
        case FormulaKind::predvar_atom: return f;
        case FormulaKind::atom: {
            auto it = m.find(f->pred);
            if (it == m.end()) return f;
            if (it->second.index() == 0)
                return mk_atom(std::get<PredicateSymbol>(it->second), f->args);
            return mk_predvar_atom(std::get<PredicateVariable>(it->second), f->args);
        }
        case FormulaKind::conj: return mk_and(rename_walk(f->lhs, m), rename_walk(f->rhs, m));
        case FormulaKind::disj: return mk_or(rename_walk(f->lhs, m), rename_walk(f->rhs, m));
        case FormulaKind::implies:
            return mk_implies(rename_walk(f->lhs, m), rename_walk(f->rhs, m));
        case FormulaKind::forall: return mk_forall(f->bound, rename_walk(f->lhs, m));
        case FormulaKind::exists: return mk_exists(f->bound, rename_walk(f->lhs, m));
        case FormulaKind::forall_so: return mk_forall_so(f->var, rename_walk(f->lhs, m));
        case FormulaKind::exists_so: return mk_exists_so(f->var, rename_walk(f->lhs, m));
    }
    return f;
}

void collect_bound_pvs(const FormulaPtr& f, std::set<PredicateVariable>& out) {
    if (f->kind == FormulaKind::forall_so || f->kind == FormulaKind::exists_so) out.insert(f->var);
    if (f->lhs) collect_bound_pvs(f->lhs, out);
    if (f->rhs) collect_bound_pvs(f->rhs, out);
}

}  // namespace

FormulaPtr rename_predicates(const FormulaPtr& f, const RenameMap& m) {
    check_arities(m);
    std::set<PredicateVariable> bound;
    collect_bound_pvs(f, bound);
    for (const auto& [from, to] : m) {
        if (to.index() == 1 && bound.count(std::get<PredicateVariable>(to)))
            throw error("rename target " + std::get<PredicateVariable>(to).to_string() +
                        " would be captured; pick a fresh predicate variable");
    }
    return rename_walk(f, m);
}

namespace {

Atom rename_atom(const Atom& a, const std::map<PredicateSymbol, PredicateSymbol>& m) {
    auto it = m.find(a.pred);
    if (it == m.end()) return a;
    return Atom{it->second, a.args};
}

}  // namespace

DefModule rename_predicates(const DefModule& d,
                            const std::map<PredicateSymbol, PredicateSymbol>& m) {
    for (const auto& [from, to] : m)
        if (from.arity != to.arity)
            throw error("rename target for " + from.to_string() + " has different arity");
    DefModule out;
    for (const auto& p : d.intensional) {
        auto it = m.find(p);
        out.intensional.push_back(it == m.end() ? p : it->second);
    }
    out.intensional = canonical_predicates(std::move(out.intensional));
    for (const auto& r : d.rules) {
        Rule nr = r;
        for (auto& a : nr.head) a = rename_atom(a, m);
        for (auto& a : nr.positive_body) a = rename_atom(a, m);
        for (auto& a : nr.negative_body) a = rename_atom(a, m);
        for (auto& a : nr.double_negated_body) a = rename_atom(a, m);
        out.rules.push_back(std::move(nr));
    }
    return out;
}

ModularProgram rename_predicates(const ModularProgram& p,
                                 const std::map<PredicateSymbol, PredicateSymbol>& m) {
    ModularProgram out;
    out.name = p.name;
    for (const auto& s : p.public_preds) {
        auto it = m.find(s);
        out.public_preds.push_back(it == m.end() ? s : it->second);
    }
    out.public_preds = canonical_predicates(std::move(out.public_preds));
    for (const auto& mem : p.members) {
        Member nm;
        if (mem.is_def())
            nm.node = rename_predicates(mem.def(), m);
        else
            nm.node = rename_predicates(mem.sub(), m);
        out.members.push_back(std::move(nm));
    }
    return out;
}

}  // namespace masp
