// Shared test fixtures: corpus file loaders, programmatic builders for the
// Hamiltonian-cycle modules, independent oracles, and a portable seeded
// generator for randomized property runs.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "masp/ast.hpp"
#include "masp/interpretation.hpp"
#include "masp/parser.hpp"

namespace masp::test {

inline std::string corpus_path(const std::string& name) {
    return std::string(MASP_CORPUS_DIR) + "/" + name;
}

inline ModularProgram load_corpus_program(const std::string& name) {
    auto res = parse_program(load_source(corpus_path(name), SourceUnit::Kind::program));
    if (!res.ok()) throw error("corpus program failed to parse: " + name);
    return *res.program;
}

inline DefModule load_corpus_instance(const std::string& name) {
    auto res = parse_instance(load_source(corpus_path(name), SourceUnit::Kind::instance));
    if (!res.ok()) throw error("corpus instance failed to parse: " + name);
    return *res.instance;
}

// ── programmatic Hamiltonian-cycle modules ──────────────────────────────────

inline Atom atom(const std::string& pred, std::vector<Term> args) {
    return Atom{{pred, static_cast<int>(args.size())}, std::move(args)};
}
inline Term v(const std::string& name) { return Term::variable(name); }
inline Term c(const std::string& name) { return Term::constant(name); }

// vertex(X) :- edge(X,Y).  vertex(X) :- edge(Y,X).
inline DefModule m1_vertex() {
    DefModule m;
    m.intensional = {{"vertex", 1}};
    Rule r1;
    r1.head = {atom("vertex", {v("X")})};
    r1.positive_body = {atom("edge", {v("X"), v("Y")})};
    Rule r2;
    r2.head = {atom("vertex", {v("X")})};
    r2.positive_body = {atom("edge", {v("Y"), v("X")})};
    m.rules = {r1, r2};
    return m;
}

// { in(X,Y) } :- edge(X,Y).
inline DefModule m2_choice() {
    DefModule m;
    m.intensional = {{"in", 2}};
    Rule r;
    r.choice = true;
    r.head = {atom("in", {v("X"), v("Y")})};
    r.positive_body = {atom("edge", {v("X"), v("Y")})};
    m.rules = {r};
    return m;
}

// r(X,Y) :- in(X,Y).  r(X,Y) :- r(X,Z), r(Z,Y).
inline DefModule m3_closure() {
    DefModule m;
    m.intensional = {{"r", 2}};
    Rule r1;
    r1.head = {atom("r", {v("X"), v("Y")})};
    r1.positive_body = {atom("in", {v("X"), v("Y")})};
    Rule r2;
    r2.head = {atom("r", {v("X"), v("Y")})};
    r2.positive_body = {atom("r", {v("X"), v("Z")}), atom("r", {v("Z"), v("Y")})};
    m.rules = {r1, r2};
    return m;
}

// :- not r(X,Y), vertex(X), vertex(Y).
inline DefModule den_connectivity() {
    DefModule m;
    Rule r;
    r.positive_body = {atom("vertex", {v("X")}), atom("vertex", {v("Y")})};
    r.negative_body = {atom("r", {v("X"), v("Y")})};
    m.rules = {r};
    return m;
}

// :- in(X,Y), in(X,Z), Y != Z.
inline DefModule den_functional() {
    DefModule m;
    Rule r;
    r.positive_body = {atom("in", {v("X"), v("Y")}), atom("in", {v("X"), v("Z")})};
    r.comparisons = {{v("Y"), v("Z"), Comparison::Op::neq}};
    m.rules = {r};
    return m;
}

using Edge = std::pair<std::string, std::string>;

inline DefModule edge_instance(const std::set<Edge>& edges) {
    DefModule m;
    m.intensional = {{"edge", 2}};
    for (const auto& [a, b] : edges) {
        Rule r;
        r.head = {atom("edge", {c(a), c(b)})};
        m.rules.push_back(r);
    }
    return m;
}

inline Member def_member(DefModule m) {
    Member mem;
    mem.node = std::move(m);
    return mem;
}
inline Member sub_member(ModularProgram p) {
    Member mem;
    mem.node = std::move(p);
    return mem;
}

// Pi_cn = <{vertex,in}, {M3, connectivity denial}>
inline ModularProgram pi_cn() {
    ModularProgram p;
    p.name = "cn";
    p.public_preds = canonical_predicates({{"vertex", 1}, {"in", 2}});
    p.members.push_back(def_member(m3_closure()));
    p.members.push_back(def_member(den_connectivity()));
    return p;
}

// Pi_hc = <{vertex,in}, {Pi_cn, functionality denial}>
inline ModularProgram pi_hc() {
    ModularProgram p;
    p.name = "hc";
    p.public_preds = canonical_predicates({{"vertex", 1}, {"in", 2}});
    p.members.push_back(sub_member(pi_cn()));
    p.members.push_back(def_member(den_functional()));
    return p;
}

// Pi_sg = <{vertex,edge,in}, {M1, M2}>
inline ModularProgram pi_sg() {
    ModularProgram p;
    p.name = "sg";
    p.public_preds = canonical_predicates({{"vertex", 1}, {"edge", 2}, {"in", 2}});
    p.members.push_back(def_member(m1_vertex()));
    p.members.push_back(def_member(m2_choice()));
    return p;
}

// Pi_1 = <{edge,in}, {Pi_sg, Pi_hc}>
inline ModularProgram pi1() {
    ModularProgram p;
    p.name = "m1";
    p.public_preds = canonical_predicates({{"edge", 2}, {"in", 2}});
    p.members.push_back(sub_member(pi_sg()));
    p.members.push_back(sub_member(pi_hc()));
    return p;
}

// Pi_1(E) = <{in}, {Pi_1, M_E}>
inline ModularProgram pi1_of(const std::set<Edge>& edges) {
    ModularProgram p;
    p.public_preds = {{"in", 2}};
    p.members.push_back(sub_member(pi1()));
    p.members.push_back(def_member(edge_instance(edges)));
    return p;
}

inline std::set<Edge> g1_edges() {
    return {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}, {"d", "c"}};
}

// ── independent oracles and helpers ─────────────────────────────────────────

// Warshall-style transitive closure, independent of the solver path.
inline std::set<Edge> transitive_closure(const std::set<Edge>& rel,
                                         const std::vector<std::string>& universe) {
    std::set<Edge> tc = rel;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& m : universe)
            for (const auto& [x, y] : std::set<Edge>(tc))
                if (tc.count({y, m}) && tc.insert({x, m}).second) changed = true;
    }
    return tc;
}

// xorshift64*; the standard library distributions are not portable across
// implementations, so tests draw bits directly
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545f4914f6cdd1dull;
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
};

inline std::set<Edge> in_extent_of(const Interpretation& i) {
    std::set<Edge> out;
    auto it = i.extents.find({"in", 2});
    if (it == i.extents.end()) return out;
    for (const auto& t : it->second) out.insert({t[0], t[1]});
    return out;
}

}  // namespace masp::test
