// ============================================================================
// masp/ast.hpp — abstract syntax for terms, formulas, rules and modular
// programs.
//
// Design notes:
//
//   Formulas are immutable nodes shared through FormulaPtr; once built they
//   are never mutated, so values can be copied and shared across threads
//   freely.  Negation and verum are encodings, not node kinds:
//
//       not F  ==  F -> bot          top  ==  bot -> bot
//
//   which keeps the star transform a five-case recursion over the
//   connective set {and, or, ->, forall, exists}.
//
//   Predicate symbols and predicate variables live in disjoint namespaces;
//   a predicate variable only ever appears in PredVarAtom nodes and in
//   second-order quantifiers.
//
//   Rules are kept in clausal form (head disjunction, positive body,
//   negative body, doubly negated body, comparisons) and are desugared to
//   formulas by rule_to_formula.
// ============================================================================

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace masp {

// Thrown by operations on malformed input (arity mismatches, unsafe rules,
// missing modules, ...).  Parse errors use Diagnostic instead.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// ── predicate symbols and variables ─────────────────────────────────────────

struct PredicateSymbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const PredicateSymbol& a, const PredicateSymbol& b) {
        return a.name == b.name && a.arity == b.arity;
    }
    friend bool operator!=(const PredicateSymbol& a, const PredicateSymbol& b) { return !(a == b); }
    friend bool operator<(const PredicateSymbol& a, const PredicateSymbol& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.arity < b.arity;
    }
    std::string to_string() const { return name + "/" + std::to_string(arity); }
};

// Same shape as PredicateSymbol but a distinct type: the namespaces are
// disjoint and must not be confused in signatures.
struct PredicateVariable {
    std::string name;
    int arity = 0;

    friend bool operator==(const PredicateVariable& a, const PredicateVariable& b) {
        return a.name == b.name && a.arity == b.arity;
    }
    friend bool operator!=(const PredicateVariable& a, const PredicateVariable& b) { return !(a == b); }
    friend bool operator<(const PredicateVariable& a, const PredicateVariable& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.arity < b.arity;
    }
    std::string to_string() const { return name + "/" + std::to_string(arity); }
};

// ── terms ────────────────────────────────────────────────────────────────────

struct Term {
    enum class Kind { constant, variable };
    Kind kind = Kind::constant;
    std::string text;

    static Term constant(std::string name) { return Term{Kind::constant, std::move(name)}; }
    static Term variable(std::string name) { return Term{Kind::variable, std::move(name)}; }
    bool is_constant() const { return kind == Kind::constant; }
    bool is_variable() const { return kind == Kind::variable; }

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && a.text == b.text;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.text < b.text;
    }
};

// ── formulas ─────────────────────────────────────────────────────────────────

enum class FormulaKind {
    bottom,
    atom,          // pred(args)
    predvar_atom,  // U(args), U a predicate variable
    equal,         // t1 = t2
    conj,
    disj,
    implies,
    forall,        // first-order
    exists,        // first-order
    forall_so,
    exists_so,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FormulaKind kind;

    PredicateSymbol pred;      // atom
    PredicateVariable var;     // predvar_atom, forall_so, exists_so
    std::vector<Term> args;    // atom, predvar_atom, equal (two entries)
    std::string bound;         // forall, exists: the FO variable
    FormulaPtr lhs, rhs;       // connectives; quantifiers use lhs as the body

    explicit Formula(FormulaKind k) : kind(k) {}
};

FormulaPtr mk_bottom();
FormulaPtr mk_top();  // bot -> bot
FormulaPtr mk_atom(PredicateSymbol pred, std::vector<Term> args);
FormulaPtr mk_predvar_atom(PredicateVariable var, std::vector<Term> args);
FormulaPtr mk_equal(Term a, Term b);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_not(FormulaPtr a);  // a -> bot
FormulaPtr mk_forall(std::string var, FormulaPtr body);
FormulaPtr mk_exists(std::string var, FormulaPtr body);
FormulaPtr mk_forall_so(PredicateVariable var, FormulaPtr body);
FormulaPtr mk_exists_so(PredicateVariable var, FormulaPtr body);

/// Left-associated conjunction of a list; empty list yields top.
FormulaPtr mk_conjunction(const std::vector<FormulaPtr>& fs);

bool is_top(const FormulaPtr& f);

/// Structural equality (bound names compared literally).
bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Equality up to renaming of bound first-order and second-order variables.
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);

bool contains_so(const FormulaPtr& f);

/// Free first-order variables, in first-occurrence order.
std::vector<std::string> free_fo_variables(const FormulaPtr& f);

/// Free predicate variables of a formula.
std::set<PredicateVariable> free_predicate_variables(const FormulaPtr& f);

/// Constants occurring anywhere in the formula.
std::set<std::string> constants_of(const FormulaPtr& f);

// ── rules ────────────────────────────────────────────────────────────────────

struct Atom {
    PredicateSymbol pred;
    std::vector<Term> args;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.pred == b.pred && a.args == b.args;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (!(a.pred == b.pred)) return a.pred < b.pred;
        return a.args < b.args;
    }
    bool is_ground() const;
    std::string to_string() const;
};

struct Comparison {
    enum class Op { eq, neq };
    Term lhs, rhs;
    Op op = Op::eq;

    friend bool operator==(const Comparison& a, const Comparison& b) {
        return a.lhs == b.lhs && a.rhs == b.rhs && a.op == b.op;
    }
    friend bool operator!=(const Comparison& a, const Comparison& b) { return !(a == b); }
};

struct Rule {
    std::vector<Atom> head;  // disjunction; empty head is a denial
    bool choice = false;     // single head atom under braces
    std::vector<Atom> positive_body;
    std::vector<Atom> negative_body;
    std::vector<Atom> double_negated_body;
    std::vector<Comparison> comparisons;

    bool is_denial() const { return head.empty(); }
    bool is_fact() const {
        return head.size() == 1 && !choice && positive_body.empty() && negative_body.empty() &&
               double_negated_body.empty() && comparisons.empty();
    }

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head == b.head && a.choice == b.choice && a.positive_body == b.positive_body &&
               a.negative_body == b.negative_body &&
               a.double_negated_body == b.double_negated_body && a.comparisons == b.comparisons;
    }
    friend bool operator!=(const Rule& a, const Rule& b) { return !(a == b); }
};

// ── def-modules and modular programs ────────────────────────────────────────

struct DefModule {
    std::vector<PredicateSymbol> intensional;  // canonically sorted, duplicate-free
    std::vector<Rule> rules;

    friend bool operator==(const DefModule& a, const DefModule& b) {
        return a.intensional == b.intensional && a.rules == b.rules;
    }
    friend bool operator!=(const DefModule& a, const DefModule& b) { return !(a == b); }

    /// Short display label, e.g. "def vertex/1" or "def {}" for denials.
    std::string label() const;
};

struct Member;

struct ModularProgram {
    std::vector<PredicateSymbol> public_preds;  // the set S, canonically sorted
    std::vector<Member> members;                // document order
    std::string name;                           // optional

    ModularProgram();
    ModularProgram(const ModularProgram&);
    ModularProgram(ModularProgram&&) noexcept;
    ModularProgram& operator=(const ModularProgram&);
    ModularProgram& operator=(ModularProgram&&) noexcept;
    ~ModularProgram();
};

bool operator==(const ModularProgram& a, const ModularProgram& b);
inline bool operator!=(const ModularProgram& a, const ModularProgram& b) { return !(a == b); }

struct Member {
    std::variant<DefModule, ModularProgram> node;

    bool is_def() const { return node.index() == 0; }
    const DefModule& def() const { return std::get<DefModule>(node); }
    DefModule& def() { return std::get<DefModule>(node); }
    const ModularProgram& sub() const { return std::get<ModularProgram>(node); }
    ModularProgram& sub() { return std::get<ModularProgram>(node); }

    friend bool operator==(const Member& a, const Member& b);
    friend bool operator!=(const Member& a, const Member& b) { return !(a == b); }
};

/// All def-modules of the tree, in document order.
std::vector<DefModule> defmods(const ModularProgram& p);

/// Union of the intensional tuples over defmods(p), canonically sorted.
std::vector<PredicateSymbol> intensional_predicates(const ModularProgram& p);

/// All predicate symbols occurring in rules of p, canonically sorted.
std::vector<PredicateSymbol> predicates_of(const ModularProgram& p);
std::vector<PredicateSymbol> predicates_of(const DefModule& m);

/// Free predicate symbols of a formula (equality and predicate variables
/// excluded), canonically sorted.
std::vector<PredicateSymbol> predicates_of(const FormulaPtr& f);

/// Constants occurring anywhere in the program.
std::set<std::string> constants_of(const ModularProgram& p);
std::set<std::string> constants_of(const DefModule& m);

/// Variables of a rule in first-occurrence order (head, then positive,
/// negative, doubly negated body, then comparisons).
std::vector<std::string> rule_variables(const Rule& r);

/// Checks the safety invariant: every rule variable occurs in some positive
/// body atom.  Returns the first unsafe variable if any.
std::optional<std::string> unsafe_variable(const Rule& r);

/// Universal closure of body -> head.  A choice head {a} :- B yields
/// forall (not not a & B -> a); an empty head yields forall (B -> bot);
/// t != u contributes not (t = u) to the body.
/// Throws error on unsafe rules, naming the variable.
FormulaPtr rule_to_formula(const Rule& r);

/// Conjunction of rule_to_formula over m's rules (top when empty).
FormulaPtr rules_formula(const DefModule& m);

// A predicate mapping target: either another symbol or a predicate variable.
using RenameTarget = std::variant<PredicateSymbol, PredicateVariable>;
using RenameMap = std::map<PredicateSymbol, RenameTarget>;

/// Capture-avoiding replacement of predicate symbols throughout a formula.
/// Throws error on arity mismatches, or if a target predicate variable is
/// already bound in f (the caller is expected to supply fresh variables).
FormulaPtr rename_predicates(const FormulaPtr& f, const RenameMap& m);

/// Symbol-to-symbol renaming over a program tree (used by alpha_normalize).
ModularProgram rename_predicates(const ModularProgram& p,
                                 const std::map<PredicateSymbol, PredicateSymbol>& m);
DefModule rename_predicates(const DefModule& d,
                            const std::map<PredicateSymbol, PredicateSymbol>& m);

/// Sort + deduplicate a predicate list into canonical order.
std::vector<PredicateSymbol> canonical_predicates(std::vector<PredicateSymbol> ps);

}  // namespace masp
