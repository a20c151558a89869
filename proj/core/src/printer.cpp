#include "masp/printer.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace masp {

// ── program printer ──────────────────────────────────────────────────────────

namespace {

std::string predlist_text(const std::vector<PredicateSymbol>& ps) {
    std::string s;
    for (size_t i = 0; i < ps.size(); ++i) {
        if (i) s += ", ";
        s += ps[i].to_string();
    }
    return s;
}

std::string literal_text(const Atom& a, int negations) {
    std::string s;
    for (int i = 0; i < negations; ++i) s += "not ";
    return s + a.to_string();
}

void print_member(const Member& m, int indent, int& anon, std::ostringstream& out);

void print_defmod(const DefModule& m, int indent, std::ostringstream& out) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    out << pad << "def";
    if (!m.intensional.empty()) out << " " << predlist_text(m.intensional);
    out << " {\n";
    for (const auto& r : m.rules) out << pad << "  " << print_rule(r) << "\n";
    out << pad << "}\n";
}

void print_submodule(const ModularProgram& p, int indent, int& anon, std::ostringstream& out) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    std::string name = p.name.empty() ? "m" + std::to_string(++anon) : p.name;
    out << pad << "module " << name << " show " << predlist_text(p.public_preds) << " {\n";
    for (const auto& m : p.members) print_member(m, indent + 1, anon, out);
    out << pad << "}\n";
}

void print_member(const Member& m, int indent, int& anon, std::ostringstream& out) {
    if (m.is_def())
        print_defmod(m.def(), indent, out);
    else
        print_submodule(m.sub(), indent, anon, out);
}

}  // namespace

std::string print_rule(const Rule& r) {
    std::string s;
    if (r.choice) {
        s += "{ " + r.head[0].to_string() + " }";
    } else {
        for (size_t i = 0; i < r.head.size(); ++i) {
            if (i) s += " ; ";
            s += r.head[i].to_string();
        }
    }
    bool has_body = !r.positive_body.empty() || !r.negative_body.empty() ||
                    !r.double_negated_body.empty() || !r.comparisons.empty();
    if (has_body || r.head.empty()) {
        if (!r.head.empty()) s += " ";
        s += ":-";
        bool first = true;
        auto emit = [&](const std::string& lit) {
            s += first ? " " : ", ";
            s += lit;
            first = false;
        };
        for (const auto& a : r.positive_body) emit(literal_text(a, 0));
        for (const auto& a : r.negative_body) emit(literal_text(a, 1));
        for (const auto& a : r.double_negated_body) emit(literal_text(a, 2));
        for (const auto& c : r.comparisons)
            emit(c.lhs.text + (c.op == Comparison::Op::eq ? " = " : " != ") + c.rhs.text);
    }
    s += ".";
    return s;
}

std::string print_program(const ModularProgram& p) {
    std::ostringstream out;
    int anon = 0;
    for (const auto& m : p.members) print_member(m, 0, anon, out);
    out << "#show " << predlist_text(p.public_preds) << ".\n";
    return out.str();
}

// ── formula printer (smf format) ─────────────────────────────────────────────

namespace {

// Display names for bound predicate variables: strip the "__k" freshness
// suffix, disambiguate with a running number when two binders share a base.
class PvNames {
public:
    explicit PvNames(const FormulaPtr& f) { walk(f); }

    std::string display(const PredicateVariable& v) const {
        auto it = names_.find(v);
        return it == names_.end() ? v.name : it->second;
    }

private:
    static std::string base_of(const std::string& name) {
        auto pos = name.rfind("__");
        std::string base = pos == std::string::npos ? name : name.substr(0, pos);
        if (base.empty()) base = "P";
        return base;
    }

    void walk(const FormulaPtr& f) {
        if (f->kind == FormulaKind::forall_so || f->kind == FormulaKind::exists_so) {
            if (!names_.count(f->var)) {
                std::string base = base_of(f->var.name);
                int n = ++used_[base];
                names_[f->var] = n == 1 ? base : base + std::to_string(n);
            }
        }
        if (f->lhs) walk(f->lhs);
        if (f->rhs) walk(f->rhs);
    }

    std::map<PredicateVariable, std::string> names_;
    std::map<std::string, int> used_;
};

// precedence: atoms 5, not 4, & 3, | 2, -> 1
int prec_of(const FormulaPtr& f) {
    switch (f->kind) {
        case FormulaKind::bottom:
        case FormulaKind::atom:
        case FormulaKind::predvar_atom:
        case FormulaKind::equal: return 5;
        case FormulaKind::conj: return 3;
        case FormulaKind::disj: return 2;
        case FormulaKind::implies:
            return f->rhs->kind == FormulaKind::bottom ? 4 : 1;  // "not" sugar
        case FormulaKind::forall:
        case FormulaKind::exists:
        case FormulaKind::forall_so:
        case FormulaKind::exists_so: return 5;  // always printed with parens around body
    }
    return 5;
}

std::string args_text(const std::vector<Term>& args) {
    if (args.empty()) return "";
    std::string s = "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i].text;
    }
    return s + ")";
}

void print_f(const FormulaPtr& f, const PvNames& names, int parent_prec, std::ostringstream& out) {
    int prec = prec_of(f);
    switch (f->kind) {
        case FormulaKind::bottom: out << "bot"; return;
        case FormulaKind::atom: out << f->pred.name << args_text(f->args); return;
        case FormulaKind::predvar_atom: out << names.display(f->var) << args_text(f->args); return;
        case FormulaKind::equal: out << f->args[0].text << " = " << f->args[1].text; return;
        case FormulaKind::conj:
        case FormulaKind::disj: {
            bool parens = prec < parent_prec;
            if (parens) out << "(";
            const char* op = f->kind == FormulaKind::conj ? " & " : " | ";
            print_f(f->lhs, names, prec, out);
            out << op;
            print_f(f->rhs, names, prec, out);
            if (parens) out << ")";
            return;
        }
        case FormulaKind::implies: {
            if (f->rhs->kind == FormulaKind::bottom && f->lhs->kind != FormulaKind::bottom) {
                out << "not ";
                // parenthesize equalities under "not" for readability
                int sub = f->lhs->kind == FormulaKind::equal ? 6 : prec + 1;
                print_f(f->lhs, names, sub, out);
                return;
            }
            bool parens = prec < parent_prec || parent_prec == 1;
            if (parens) out << "(";
            print_f(f->lhs, names, prec + 1, out);
            out << " -> ";
            print_f(f->rhs, names, prec, out);
            if (parens) out << ")";
            return;
        }
        case FormulaKind::forall:
        case FormulaKind::exists: {
            out << (f->kind == FormulaKind::forall ? "forall" : "exists");
            FormulaKind k = f->kind;
            FormulaPtr cur = f;
            while (cur->kind == k) {
                out << " " << cur->bound;
                cur = cur->lhs;
            }
            out << " (";
            print_f(cur, names, 0, out);
            out << ")";
            return;
        }
        case FormulaKind::forall_so:
        case FormulaKind::exists_so: {
            out << (f->kind == FormulaKind::forall_so ? "forallP" : "existsP");
            FormulaKind k = f->kind;
            FormulaPtr cur = f;
            while (cur->kind == k) {
                out << " " << names.display(cur->var) << "/" << cur->var.arity;
                cur = cur->lhs;
            }
            out << " (";
            print_f(cur, names, 0, out);
            out << ")";
            return;
        }
    }
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
    PvNames names(f);
    std::ostringstream out;
    print_f(f, names, 0, out);
    return out.str();
}

}  // namespace masp
