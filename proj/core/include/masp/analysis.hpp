// Structural analyses on modular programs: the predicate dependency graph
// and its strongly connected components, tightness, simplicity, alpha-normal
// form, coherence, and flattening.

#pragma once

#include "masp/ast.hpp"
#include "masp/diagnostics.hpp"

namespace masp {

struct DependencyGraph {
    std::vector<PredicateSymbol> nodes;                            // canonically sorted
    std::set<std::pair<PredicateSymbol, PredicateSymbol>> edges;   // (head, positive-body)
};

/// Nodes are the intensional predicates; one edge (p,q) per rule with p in
/// the head and q in the positive body, restricted to nodes.  Negative and
/// doubly negated literals and comparisons contribute no edges.
DependencyGraph dependency_graph(const ModularProgram& p);

/// Tarjan partition, sorted for determinism.  A singleton without self-loop
/// still forms an SCC.
std::vector<std::vector<PredicateSymbol>> sccs(const DependencyGraph& g);

/// Acyclicity of the def-module's own dependency graph (self-loops count).
bool is_tight(const DefModule& m);

/// Every def-module's head predicates lie in its intensional tuple.
bool is_simple(const ModularProgram& p);

/// True when every predicate name in phi(p) is either entirely free or
/// bound by a single existential occurrence.
bool alpha_nf_check(const ModularProgram& p);

/// Renames hidden symbols so the result is alpha-NF; models are preserved.
/// Idempotent; already-unique hidden names are left alone.
ModularProgram alpha_normalize(const ModularProgram& p);

struct CoherenceReport {
    bool simple = false;
    bool alpha_nf = false;
    bool disjoint_intensional = false;
    bool scc_covered = false;
    bool coherent = false;  // conjunction of the four
    std::vector<Diagnostic> violations;
};

CoherenceReport is_coherent(const ModularProgram& p);

/// <public(p), defmods(p)>.  Semantic equivalence is guaranteed only under
/// alpha-NF; a warning is appended otherwise.
ModularProgram flatten(const ModularProgram& p, std::vector<Diagnostic>* warnings = nullptr);

/// Deterministic DOT text for the dependency graph.
std::string to_dot(const DependencyGraph& g);

}  // namespace masp
