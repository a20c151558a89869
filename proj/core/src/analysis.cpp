#include "masp/analysis.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "masp/transform.hpp"

namespace masp {

// ── dependency graph and SCCs ───────────────────────────────────────────────

namespace {

void add_rule_edges(const Rule& r, const std::vector<PredicateSymbol>& nodes,
                    std::set<std::pair<PredicateSymbol, PredicateSymbol>>& edges) {
    auto is_node = [&](const PredicateSymbol& p) {
        return std::binary_search(nodes.begin(), nodes.end(), p);
    };
    for (const auto& h : r.head) {
        if (!is_node(h.pred)) continue;
        for (const auto& b : r.positive_body)
            if (is_node(b.pred)) edges.emplace(h.pred, b.pred);
    }
}

}  // namespace

DependencyGraph dependency_graph(const ModularProgram& p) {
    DependencyGraph g;
    g.nodes = intensional_predicates(p);
    for (const auto& d : defmods(p))
        for (const auto& r : d.rules) add_rule_edges(r, g.nodes, g.edges);
    return g;
}

namespace {

struct TarjanState {
    const std::vector<std::vector<int>>& succ;
    std::vector<int> index, low, on_stack;
    std::vector<int> stack;
    int counter = 0;
    std::vector<std::vector<int>> components;

    explicit TarjanState(const std::vector<std::vector<int>>& s)
        : succ(s), index(s.size(), -1), low(s.size(), 0), on_stack(s.size(), 0) {}

    void visit(int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int w : succ[static_cast<size_t>(v)]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            while (true) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.push_back(w);
                if (w == v) break;
            }
            components.push_back(std::move(comp));
        }
    }
};

}  // namespace

std::vector<std::vector<PredicateSymbol>> sccs(const DependencyGraph& g) {
    std::map<PredicateSymbol, int> id;
    for (size_t i = 0; i < g.nodes.size(); ++i) id[g.nodes[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> succ(g.nodes.size());
    for (const auto& [a, b] : g.edges) succ[static_cast<size_t>(id.at(a))].push_back(id.at(b));
    for (auto& s : succ) std::sort(s.begin(), s.end());

    TarjanState t(succ);
    for (size_t v = 0; v < g.nodes.size(); ++v)
        if (t.index[static_cast<int>(v)] < 0) t.visit(static_cast<int>(v));

    std::vector<std::vector<PredicateSymbol>> out;
    for (auto& comp : t.components) {
        std::vector<PredicateSymbol> c;
        for (int v : comp) c.push_back(g.nodes[static_cast<size_t>(v)]);
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_tight(const DefModule& m) {
    ModularProgram single;
    single.public_preds = predicates_of(m);
    Member mem;
    mem.node = m;
    single.members.push_back(std::move(mem));
    DependencyGraph g = dependency_graph(single);

    // cycle detection over the restricted graph; self-loops are cycles
    std::map<PredicateSymbol, std::vector<PredicateSymbol>> succ;
    for (const auto& [a, b] : g.edges) succ[a].push_back(b);
    std::map<PredicateSymbol, int> state;  // 0 new, 1 active, 2 done
    std::function<bool(const PredicateSymbol&)> dfs = [&](const PredicateSymbol& v) {
        state[v] = 1;
        for (const auto& w : succ[v]) {
            if (state[w] == 1) return true;
            if (state[w] == 0 && dfs(w)) return true;
        }
        state[v] = 2;
        return false;
    };
    for (const auto& v : g.nodes)
        if (state[v] == 0 && dfs(v)) return false;
    return true;
}

bool is_simple(const ModularProgram& p) {
    for (const auto& d : defmods(p)) {
        for (const auto& r : d.rules)
            for (const auto& h : r.head)
                if (!std::binary_search(d.intensional.begin(), d.intensional.end(), h.pred))
                    return false;
    }
    return true;
}

// ── alpha-normal form ────────────────────────────────────────────────────────

namespace {

struct HiddenOccurrence {
    std::vector<size_t> path;  // member indices from the root
    PredicateSymbol symbol;
};

void collect_hidden(const ModularProgram& p, std::vector<size_t>& path,
                    std::vector<HiddenOccurrence>& out) {
    for (const auto& s : hidden_at(p)) out.push_back({path, s});
    for (size_t i = 0; i < p.members.size(); ++i) {
        if (p.members[i].is_def()) continue;
        path.push_back(i);
        collect_hidden(p.members[i].sub(), path, out);
        path.pop_back();
    }
}

std::vector<HiddenOccurrence> hidden_occurrences(const ModularProgram& p) {
    std::vector<size_t> path;
    std::vector<HiddenOccurrence> out;
    collect_hidden(p, path, out);
    return out;
}

std::set<PredicateSymbol> violating_symbols(const ModularProgram& p) {
    auto occ = hidden_occurrences(p);
    auto frees = free_predicates(p);
    std::map<PredicateSymbol, int> count;
    for (const auto& o : occ) ++count[o.symbol];
    std::set<PredicateSymbol> bad;
    for (const auto& [s, n] : count) {
        if (n > 1) bad.insert(s);
        if (std::binary_search(frees.begin(), frees.end(), s)) bad.insert(s);
    }
    return bad;
}

}  // namespace

bool alpha_nf_check(const ModularProgram& p) { return violating_symbols(p).empty(); }

namespace {

ModularProgram& subtree_at(ModularProgram& root, const std::vector<size_t>& path) {
    ModularProgram* cur = &root;
    for (size_t i : path) cur = &cur->members[i].sub();
    return *cur;
}

}  // namespace

ModularProgram alpha_normalize(const ModularProgram& p) {
    ModularProgram out = p;
    auto bad = violating_symbols(out);
    if (bad.empty()) return out;

    std::set<std::string> taken;
    for (const auto& s : predicates_of(out)) taken.insert(s.name);
    auto fresh_name = [&](const std::string& base) {
        for (int k = 1;; ++k) {
            std::string cand = base + "__" + std::to_string(k);
            if (!taken.count(cand)) {
                taken.insert(cand);
                return cand;
            }
        }
    };

    // rename deepest occurrences first so an ancestor's rename cannot touch
    // a descendant's (shadowed) binding
    auto occ = hidden_occurrences(out);
    std::stable_sort(occ.begin(), occ.end(),
                     [](const HiddenOccurrence& a, const HiddenOccurrence& b) {
                         return a.path.size() > b.path.size();
                     });
    for (const auto& o : occ) {
        if (!bad.count(o.symbol)) continue;
        PredicateSymbol fresh{fresh_name(o.symbol.name), o.symbol.arity};
        ModularProgram& node = subtree_at(out, o.path);
        node = rename_predicates(node, {{o.symbol, fresh}});
    }
    return out;
}

// ── coherence ────────────────────────────────────────────────────────────────

CoherenceReport is_coherent(const ModularProgram& p) {
    CoherenceReport rep;
    auto diag = [&](const std::string& msg) {
        rep.violations.push_back({Diagnostic::Severity::error, 1, 1, msg});
    };

    rep.simple = is_simple(p);
    if (!rep.simple) {
        for (const auto& d : defmods(p))
            for (const auto& r : d.rules)
                for (const auto& h : r.head)
                    if (!std::binary_search(d.intensional.begin(), d.intensional.end(), h.pred))
                        diag("head predicate " + h.pred.to_string() + " of " + d.label() +
                             " is not intensional");
    }

    rep.alpha_nf = alpha_nf_check(p);
    if (!rep.alpha_nf)
        for (const auto& s : violating_symbols(p))
            diag("hidden predicate " + s.to_string() +
                 " is bound more than once or also occurs free");

    rep.disjoint_intensional = true;
    auto mods = defmods(p);
    for (size_t i = 0; i < mods.size(); ++i)
        for (size_t j = i + 1; j < mods.size(); ++j)
            for (const auto& s : mods[i].intensional)
                if (std::binary_search(mods[j].intensional.begin(), mods[j].intensional.end(),
                                       s)) {
                    rep.disjoint_intensional = false;
                    diag("predicate " + s.to_string() + " is intensional in two def-modules");
                }

    rep.scc_covered = true;
    for (const auto& comp : sccs(dependency_graph(p))) {
        bool covered = false;
        for (const auto& d : mods) {
            bool all = std::all_of(comp.begin(), comp.end(), [&](const PredicateSymbol& s) {
                return std::binary_search(d.intensional.begin(), d.intensional.end(), s);
            });
            if (all) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            rep.scc_covered = false;
            std::string names;
            for (const auto& s : comp) names += (names.empty() ? "" : ", ") + s.to_string();
            diag("strongly connected component {" + names +
                 "} is not contained in a single def-module");
        }
    }

    rep.coherent = rep.simple && rep.alpha_nf && rep.disjoint_intensional && rep.scc_covered;
    return rep;
}

ModularProgram flatten(const ModularProgram& p, std::vector<Diagnostic>* warnings) {
    if (warnings && !alpha_nf_check(p))
        warnings->push_back({Diagnostic::Severity::warning, 1, 1,
                             "program is not in alpha-normal form; flattening may not preserve "
                             "models (run alpha normalization first)"});
    ModularProgram out;
    out.public_preds = p.public_preds;
    out.name = p.name;
    for (auto& d : defmods(p)) {
        Member m;
        m.node = std::move(d);
        out.members.push_back(std::move(m));
    }
    return out;
}

std::string to_dot(const DependencyGraph& g) {
    std::ostringstream out;
    out << "digraph dependencies {\n";
    std::set<PredicateSymbol> with_edges;
    for (const auto& [a, b] : g.edges) {
        with_edges.insert(a);
        with_edges.insert(b);
    }
    for (const auto& n : g.nodes)
        if (!with_edges.count(n)) out << "  \"" << n.name << "\";\n";
    for (const auto& [a, b] : g.edges)
        out << "  \"" << a.name << "\" -> \"" << b.name << "\";\n";
    out << "}\n";
    return out.str();
}

}  // namespace masp
