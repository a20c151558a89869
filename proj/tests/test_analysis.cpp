#include <doctest.h>

#include "masp/analysis.hpp"
#include "masp/evaluator.hpp"
#include "masp/printer.hpp"
#include "masp/transform.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace masp;
using namespace masp::test;

TEST_CASE("dependency graph of the instantiated program") {
    auto g = dependency_graph(pi1_of(g1_edges()));
    CHECK(g.nodes ==
          canonical_predicates({{"edge", 2}, {"in", 2}, {"r", 2}, {"vertex", 1}}));
    std::set<std::pair<PredicateSymbol, PredicateSymbol>> expect = {
        {{"vertex", 1}, {"edge", 2}},
        {{"in", 2}, {"edge", 2}},
        {{"r", 2}, {"in", 2}},
        {{"r", 2}, {"r", 2}},
    };
    CHECK(g.edges == expect);
}

TEST_CASE("dependency graph: single fact module") {
    ModularProgram p;
    p.public_preds = {{"edge", 2}};
    p.members.push_back(def_member(edge_instance({{"a", "a"}})));
    auto g = dependency_graph(p);
    CHECK(g.nodes == std::vector<PredicateSymbol>{{"edge", 2}});
    CHECK(g.edges.empty());
}

TEST_CASE("dependency graph of the alternative encoding") {
    auto alt = load_corpus_program("hc_alt.masp");
    auto joined = join_instance(alt, edge_instance(g1_edges()), std::nullopt);
    auto g = dependency_graph(joined);
    CHECK(g.edges.count({{"ra", 1}, {"in", 2}}) == 1);
    CHECK(g.edges.count({{"ra", 1}, {"ra", 1}}) == 1);
    CHECK(g.edges.count({{"vertex", 1}, {"edge", 2}}) == 1);
}

TEST_CASE("sccs") {
    SUBCASE("four singletons for the instantiated program") {
        auto comps = sccs(dependency_graph(pi1_of(g1_edges())));
        REQUIRE(comps.size() == 4);
        for (const auto& comp : comps) CHECK(comp.size() == 1);
    }
    SUBCASE("empty graph") {
        CHECK(sccs(DependencyGraph{}).empty());
    }
    SUBCASE("two-cycle collapses into one component") {
        DependencyGraph g;
        g.nodes = canonical_predicates({{"p", 1}, {"q", 1}});
        g.edges = {{{"p", 1}, {"q", 1}}, {{"q", 1}, {"p", 1}}};
        auto comps = sccs(g);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0] == canonical_predicates({{"p", 1}, {"q", 1}}));
    }
    SUBCASE("components partition the node set") {
        auto g = dependency_graph(pi1_of(g1_edges()));
        auto comps = sccs(g);
        std::vector<PredicateSymbol> all;
        for (const auto& comp : comps) all.insert(all.end(), comp.begin(), comp.end());
        CHECK(canonical_predicates(all) == g.nodes);
        size_t total = 0;
        for (const auto& comp : comps) total += comp.size();
        CHECK(total == g.nodes.size());
    }
}

TEST_CASE("tightness") {
    CHECK(!is_tight(m3_closure()));  // r depends on r
    CHECK(is_tight(m1_vertex()));
    CHECK(is_tight(m2_choice()));
    CHECK(is_tight(edge_instance(g1_edges())));
    CHECK(is_tight(DefModule{}));
}

TEST_CASE("simplicity") {
    CHECK(is_simple(pi1_of(g1_edges())));
    SUBCASE("fact with empty intensional tuple is not simple") {
        ModularProgram p;
        DefModule d;
        Rule f;
        f.head = {atom("p", {c("a")})};
        d.rules = {f};
        p.members.push_back(def_member(d));
        p.public_preds = {{"p", 1}};
        CHECK(!is_simple(p));
    }
    SUBCASE("denial-only def-module is simple") {
        ModularProgram p;
        DefModule d;
        Rule denial;
        denial.positive_body = {atom("q", {v("X")})};
        d.rules = {denial};
        p.members.push_back(def_member(d));
        p.public_preds = {{"q", 1}};
        CHECK(is_simple(p));
    }
}

namespace {

// two sibling submodules both hiding r/2
ModularProgram sibling_hiders() {
    auto mk_sub = [](const std::string& fact_pred) {
        ModularProgram sub;
        sub.name = fact_pred;
        sub.public_preds = {{fact_pred, 1}};
        DefModule d;
        d.intensional = canonical_predicates({{fact_pred, 1}, {"r", 2}});
        Rule fr;
        fr.head = {atom("r", {c("a"), c("a")})};
        Rule fp;
        fp.head = {Atom{{fact_pred, 1}, {c("a")}}};
        Rule use;
        use.head = {Atom{{fact_pred, 1}, {v("X")}}};
        use.positive_body = {atom("r", {v("X"), v("X")})};
        d.rules = {fr, fp, use};
        sub.members.push_back(def_member(d));
        return sub;
    };
    ModularProgram p;
    p.public_preds = canonical_predicates({{"p1", 1}, {"p2", 1}});
    p.members.push_back(sub_member(mk_sub("p1")));
    p.members.push_back(sub_member(mk_sub("p2")));
    return p;
}

}  // namespace

TEST_CASE("alpha normal form") {
    SUBCASE("the instantiated corpus program is already normal") {
        CHECK(alpha_nf_check(pi1_of(g1_edges())));
        CHECK(alpha_normalize(pi1_of(g1_edges())) == pi1_of(g1_edges()));
    }
    SUBCASE("sibling hiders violate and normalize apart") {
        auto p = sibling_hiders();
        CHECK(!alpha_nf_check(p));
        auto n = alpha_normalize(p);
        CHECK(alpha_nf_check(n));
        auto names = predicates_of(n);
        CHECK(std::find(names.begin(), names.end(), PredicateSymbol{"r__1", 2}) != names.end());
        CHECK(std::find(names.begin(), names.end(), PredicateSymbol{"r__2", 2}) != names.end());
        SUBCASE("normalization is idempotent") { CHECK(alpha_normalize(n) == n); }
        SUBCASE("public set and answer sets are preserved") {
            CHECK(n.public_preds == p.public_preds);
            SolveOptions naive;
            naive.strategy = SolveOptions::Strategy::naive;
            CHECK(answer_sets(p, std::nullopt, naive) == answer_sets(n, std::nullopt, naive));
        }
    }
}

TEST_CASE("alpha normalization separates a hidden symbol from its free twin") {
    // a submodule hides r while a sibling uses r as a free predicate; the
    // hidden occurrence must move out of the way
    ModularProgram sub;
    sub.name = "s";
    sub.public_preds = {{"p", 1}};
    DefModule d;
    d.intensional = canonical_predicates({{"p", 1}, {"r", 2}});
    Rule fr;
    fr.head = {atom("r", {c("a"), c("a")})};
    Rule fp;
    fp.head = {atom("p", {v("X")})};
    fp.positive_body = {atom("r", {v("X"), v("X")})};
    d.rules = {fr, fp};
    sub.members.push_back(def_member(d));

    DefModule user;
    user.intensional = {{"q", 1}};
    Rule rq;
    rq.head = {atom("q", {v("X")})};
    rq.positive_body = {atom("r", {v("X"), v("X")})};  // a different, free r
    user.rules = {rq};

    ModularProgram p;
    p.public_preds = canonical_predicates({{"p", 1}, {"q", 1}, {"r", 2}});
    p.members.push_back(sub_member(sub));
    p.members.push_back(def_member(user));

    CHECK(!alpha_nf_check(p));
    auto n = alpha_normalize(p);
    CHECK(alpha_nf_check(n));
    // the free occurrence keeps its name, the hidden one was renamed
    auto names = predicates_of(n.members[1].def());
    CHECK(std::find(names.begin(), names.end(), PredicateSymbol{"r", 2}) != names.end());
    auto sub_names = predicates_of(n.members[0].sub());
    CHECK(std::find(sub_names.begin(), sub_names.end(), PredicateSymbol{"r", 2}) ==
          sub_names.end());
}

TEST_CASE("coherence") {
    SUBCASE("the instantiated corpus program is coherent") {
        auto rep = is_coherent(pi1_of(g1_edges()));
        CHECK(rep.simple);
        CHECK(rep.alpha_nf);
        CHECK(rep.disjoint_intensional);
        CHECK(rep.scc_covered);
        CHECK(rep.coherent);
        CHECK(rep.violations.empty());
    }
    SUBCASE("two def-modules sharing an intensional predicate") {
        ModularProgram p;
        DefModule d1, d2;
        d1.intensional = d2.intensional = {{"p", 1}};
        Rule f;
        f.head = {atom("p", {c("a")})};
        d1.rules = d2.rules = {f};
        p.members.push_back(def_member(d1));
        p.members.push_back(def_member(d2));
        p.public_preds = {{"p", 1}};
        auto rep = is_coherent(p);
        CHECK(!rep.disjoint_intensional);
        CHECK(!rep.coherent);
        CHECK(!rep.violations.empty());
    }
    SUBCASE("a cross-module positive cycle breaks SCC coverage") {
        // p :- q and q :- p in different def-modules
        ModularProgram p;
        DefModule dp, dq, guard;
        dp.intensional = {{"p", 1}};
        Rule rp;
        rp.head = {atom("p", {v("X")})};
        rp.positive_body = {atom("q", {v("X")})};
        dp.rules = {rp};
        dq.intensional = {{"q", 1}};
        Rule rq;
        rq.head = {atom("q", {v("X")})};
        rq.positive_body = {atom("p", {v("X")})};
        dq.rules = {rq};
        p.members.push_back(def_member(dp));
        p.members.push_back(def_member(dq));
        p.public_preds = canonical_predicates({{"p", 1}, {"q", 1}});
        auto rep = is_coherent(p);
        CHECK(!rep.scc_covered);
        CHECK(!rep.coherent);
    }
}

TEST_CASE("flatten") {
    SUBCASE("the instantiated program flattens to six def-modules") {
        auto flat = flatten(pi1_of(g1_edges()));
        CHECK(flat.public_preds == std::vector<PredicateSymbol>{{"in", 2}});
        REQUIRE(flat.members.size() == 6);
        for (const auto& m : flat.members) CHECK(m.is_def());
        // printing it shows six def blocks
        std::string text = print_program(flat);
        size_t count = 0;
        for (size_t pos = 0; (pos = text.find("def", pos)) != std::string::npos; ++pos) ++count;
        CHECK(count == 6);
    }
    SUBCASE("flattening a flat program is the identity") {
        auto flat = flatten(pi1_of(g1_edges()));
        CHECK(flatten(flat) == flat);
    }
    SUBCASE("non-alpha-NF input warns") {
        std::vector<Diagnostic> w;
        flatten(sibling_hiders(), &w);
        REQUIRE(w.size() == 1);
        CHECK(w[0].severity == Diagnostic::Severity::warning);
    }
    SUBCASE("models at a two-constant world coincide with the nested program") {
        auto prog = pi1_of({{"a", "b"}, {"b", "a"}});
        Domain dom = Domain::of({"a", "b"});
        auto sig = free_predicates(prog);
        CHECK(herbrand_models(phi(prog), sig, dom) ==
              herbrand_models(phi(flatten(prog)), sig, dom));
    }
}

TEST_CASE("alpha_normalize keeps evaluator behaviour for random coherent programs") {
    Rng rng(7771);
    for (int i = 0; i < 10; ++i) {
        auto p = random_coherent_program(rng);
        REQUIRE(is_coherent(p).coherent);
        CHECK(alpha_normalize(p) == p);  // generator builds unique hidden names
    }
}

TEST_CASE("DOT export is deterministic and quoted") {
    auto text = to_dot(dependency_graph(pi1_of(g1_edges())));
    CHECK(text ==
          "digraph dependencies {\n"
          "  \"in\" -> \"edge\";\n"
          "  \"r\" -> \"in\";\n"
          "  \"r\" -> \"r\";\n"
          "  \"vertex\" -> \"edge\";\n"
          "}\n");
}
