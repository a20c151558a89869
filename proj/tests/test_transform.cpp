#include <doctest.h>

#include "masp/analysis.hpp"
#include "masp/evaluator.hpp"
#include "masp/printer.hpp"
#include "masp/transform.hpp"
#include "support/corpus.hpp"

using namespace masp;
using namespace masp::test;

namespace {

FormulaPtr edge_xy() { return mk_atom({"edge", 2}, {v("X"), v("Y")}); }
FormulaPtr in_xy() { return mk_atom({"in", 2}, {v("X"), v("Y")}); }
FormulaPtr r_xy() { return mk_atom({"r", 2}, {v("X"), v("Y")}); }

StarContext ctx_in_r() {
    StarContext ctx;
    ctx.mapping[{"in", 2}] = PredicateVariable{"IN", 2};
    ctx.mapping[{"r", 2}] = PredicateVariable{"R", 2};
    return ctx;
}

}  // namespace

TEST_CASE("star: atoms over non-intensional symbols are unchanged") {
    CHECK(equal(star(edge_xy(), ctx_in_r()), edge_xy()));
    CHECK(equal(star(mk_bottom(), ctx_in_r()), mk_bottom()));
    CHECK(equal(star(mk_equal(v("X"), v("Y")), ctx_in_r()), mk_equal(v("X"), v("Y"))));
}

TEST_CASE("star: implication strengthens with its original copy") {
    FormulaPtr f = mk_implies(in_xy(), r_xy());
    FormulaPtr expect = mk_and(mk_implies(mk_predvar_atom({"IN", 2}, {v("X"), v("Y")}),
                                          mk_predvar_atom({"R", 2}, {v("X"), v("Y")})),
                               f);
    CHECK(equal(star(f, ctx_in_r()), expect));
}

TEST_CASE("star: negation unfolds through the implication case") {
    FormulaPtr f = mk_not(in_xy());
    FormulaPtr expect =
        mk_and(mk_implies(mk_predvar_atom({"IN", 2}, {v("X"), v("Y")}), mk_bottom()), f);
    CHECK(equal(star(f, ctx_in_r()), expect));
}

TEST_CASE("star rejects second-order input") {
    FormulaPtr so = mk_exists_so({"U", 1}, mk_predvar_atom({"U", 1}, {v("X")}));
    CHECK_THROWS_AS(star(so, ctx_in_r()), error);
}

TEST_CASE("star distributes over conjunction") {
    FormulaPtr a = in_xy();
    FormulaPtr b = mk_implies(in_xy(), r_xy());
    CHECK(equal(star(mk_and(a, b), ctx_in_r()),
                mk_and(star(a, ctx_in_r()), star(b, ctx_in_r()))));
}

TEST_CASE("sm with an empty tuple is the identity") {
    FormulaPtr f = mk_forall("X", mk_implies(edge_xy(), in_xy()));
    CHECK(equal(sm({}, f), f));
}

TEST_CASE("sm shape: ground fact") {
    // sm(<edge>, edge(a,b)) over {a,b} has the unique model {edge(a,b)},
    // checked by exhausting all 16 extents through the evaluator
    FormulaPtr fact = mk_atom({"edge", 2}, {c("a"), c("b")});
    FormulaPtr f = sm({{"edge", 2}}, fact);
    Domain dom = Domain::of({"a", "b"});
    auto models = herbrand_models(f, {{"edge", 2}}, dom);
    REQUIRE(models.size() == 1);
    CHECK(models[0].to_text() == "edge(a,b)");
    // and equals the oracle route
    Interpretation none{dom, {}};
    auto oracle = naive_stable_models(fact, {{"edge", 2}}, dom, none);
    CHECK(models == oracle);
}

TEST_CASE("sm: rule with all predicates intensional has the empty answer set") {
    // def-module (edge,vertex : forall x y (edge(x,y) -> vertex(x)))
    FormulaPtr f = mk_forall(
        "X", mk_forall("Y", mk_implies(edge_xy(), mk_atom({"vertex", 1}, {v("X")}))));
    auto models = herbrand_models(sm({{"edge", 2}, {"vertex", 1}}, f),
                                  {{"edge", 2}, {"vertex", 1}}, Domain::of({"a", "b"}));
    REQUIRE(models.size() == 1);
    CHECK(models[0].atom_count() == 0);
}

TEST_CASE("hide with an empty tuple is the identity") {
    FormulaPtr f = edge_xy();
    CHECK(equal(hide({}, f), f));
}

TEST_CASE("hide matches the module semantics of the closure module") {
    // hide(<r>, sm(<r>, F_tr)) is alpha-equal to the formula phi builds for
    // Pi_cn's closure member wrapped in its existential
    DefModule m3 = m3_closure();
    FormulaPtr inner = hide({{"r", 2}}, sm({{"r", 2}}, rules_formula(m3)));

    ModularProgram cn_only;
    cn_only.public_preds = canonical_predicates({{"in", 2}});
    cn_only.members.push_back(def_member(m3));
    CHECK(alpha_equal(inner, phi(cn_only)));
}

TEST_CASE("phi of a single all-public def-module adds no quantifier") {
    ModularProgram p;
    p.public_preds = canonical_predicates({{"edge", 2}, {"vertex", 1}});
    p.members.push_back(def_member(m1_vertex()));
    CHECK(alpha_equal(phi(p), sm({{"vertex", 1}}, rules_formula(m1_vertex()))));
}

TEST_CASE("free predicates of phi") {
    CHECK(free_predicates(pi_cn()) == canonical_predicates({{"vertex", 1}, {"in", 2}}));
    CHECK(hidden_at(pi_cn()) == std::vector<PredicateSymbol>{{"r", 2}});
    CHECK(free_predicates(pi1()) == canonical_predicates({{"edge", 2}, {"in", 2}}));
    CHECK(predicates_of(phi(pi1())) == canonical_predicates({{"edge", 2}, {"in", 2}}));
    CHECK(free_predicates(pi1_of(g1_edges())) == std::vector<PredicateSymbol>{{"in", 2}});
}

TEST_CASE("phi_minus drops members containing the target") {
    auto p1 = pi1();
    SUBCASE("removing Pi_hc leaves Pi_sg") {
        CHECK(alpha_equal(phi_minus(p1, pi_hc()), phi(pi_sg())));
    }
    SUBCASE("single-member program minus itself is top") {
        ModularProgram host;
        host.public_preds = pi_hc().public_preds;
        host.members.push_back(sub_member(pi_hc()));
        CHECK(is_top(phi_minus(host, pi_hc())));
    }
    SUBCASE("instance member survives") {
        auto pe = pi1_of(g1_edges());
        FormulaPtr expect = mk_and(phi(pi_sg()), phi(edge_instance(g1_edges())));
        CHECK(alpha_equal(phi_minus(pe, pi_hc()), expect));
    }
    SUBCASE("missing target throws") {
        ModularProgram other;
        other.public_preds = {{"zzz", 1}};
        CHECK_THROWS_AS(phi_minus(p1, other), error);
    }
}

TEST_CASE("rules_conjunction spells out the whole encoding") {
    // the instantiated program's rules, written out by hand
    std::vector<FormulaPtr> expect;
    auto edge = [](const char* x, const char* y) {
        return mk_atom({"edge", 2}, {v(x), v(y)});
    };
    expect.push_back(mk_forall(
        "X", mk_forall("Y", mk_implies(edge("X", "Y"), mk_atom({"vertex", 1}, {v("X")})))));
    expect.push_back(mk_forall(
        "X", mk_forall("Y", mk_implies(edge("Y", "X"), mk_atom({"vertex", 1}, {v("X")})))));
    expect.push_back(mk_forall(
        "X", mk_forall("Y", mk_implies(mk_and(mk_not(mk_not(in_xy())), edge("X", "Y")),
                                       in_xy()))));
    expect.push_back(mk_forall("X", mk_forall("Y", mk_implies(in_xy(), r_xy()))));
    expect.push_back(mk_forall(
        "X", mk_forall("Y", mk_forall("Z", mk_implies(mk_and(mk_atom({"r", 2}, {v("X"), v("Z")}),
                                                             mk_atom({"r", 2}, {v("Z"), v("Y")})),
                                                      r_xy())))));
    expect.push_back(mk_forall(
        "X", mk_forall("Y", mk_implies(mk_and(mk_and(mk_atom({"vertex", 1}, {v("X")}),
                                                     mk_atom({"vertex", 1}, {v("Y")})),
                                              mk_not(r_xy())),
                                       mk_bottom()))));
    expect.push_back(mk_forall(
        "X",
        mk_forall("Y", mk_forall("Z", mk_implies(mk_and(mk_and(in_xy(),
                                                               mk_atom({"in", 2},
                                                                       {v("X"), v("Z")})),
                                                        mk_not(mk_equal(v("Y"), v("Z")))),
                                                 mk_bottom())))));
    for (const auto& [x, y] : g1_edges())
        expect.push_back(mk_atom({"edge", 2}, {c(x), c(y)}));
    CHECK(alpha_equal(rules_conjunction(pi1_of(g1_edges())), mk_conjunction(expect)));
}

TEST_CASE("rules_conjunction is flat and flattening-invariant") {
    auto pe = pi1_of(g1_edges());
    FormulaPtr f = rules_conjunction(pe);
    CHECK(!contains_so(f));
    CHECK(equal(f, rules_conjunction(flatten(pe))));

    ModularProgram single;
    single.public_preds = canonical_predicates(predicates_of(m3_closure()));
    single.members.push_back(def_member(m3_closure()));
    CHECK(equal(rules_conjunction(single), rules_formula(m3_closure())));
}

TEST_CASE("every Herbrand model of sm(p,f) is a model of f") {
    // per corpus def-module, all models at a small domain
    Domain dom2 = Domain::of({"a", "b"});
    Domain dom3 = Domain::of({"a", "b", "c"});
    for (const auto& m : defmods(pi1_of(g1_edges()))) {
        if (m.intensional.empty()) continue;
        FormulaPtr f = rules_formula(m);
        FormulaPtr smf = sm(m.intensional, f);
        auto sig = predicates_of(m);
        for (const Domain& dom : {dom2, dom3}) {
            for (const auto& i : herbrand_models(smf, sig, dom)) CHECK(evaluate(f, i));
        }
    }
}

TEST_CASE("projection lemma at domain 2: hide equals solve-then-project") {
    // F = rules of Pi_1(E) for a one-edge instance over {a,b}
    auto prog = pi1_of({{"a", "b"}});
    FormulaPtr f = rules_conjunction(prog);
    auto p = intensional_predicates(prog);
    Domain dom = Domain::of({"a", "b"});

    std::vector<PredicateSymbol> hidden = {{"edge", 2}, {"r", 2}, {"vertex", 1}};
    FormulaPtr hidden_formula = hide(hidden, sm(p, f));
    auto via_formula = herbrand_models(hidden_formula, {{"in", 2}}, dom);

    Interpretation none{dom, {}};
    auto stable = naive_stable_models(f, p, dom, none);
    std::vector<Interpretation> via_oracle;
    for (const auto& i : stable) via_oracle.push_back(project(i, {{"in", 2}}));
    std::sort(via_oracle.begin(), via_oracle.end());
    via_oracle.erase(std::unique(via_oracle.begin(), via_oracle.end()), via_oracle.end());

    CHECK(via_formula == via_oracle);
}

TEST_CASE("U < p expands into both inclusion directions") {
    FormulaPtr f = sm({{"p", 1}}, mk_atom({"p", 1}, {c("a")}));
    // shape: p(a) & not existsP U (U <= p & not (p <= U) & star)
    REQUIRE(f->kind == FormulaKind::conj);
    const FormulaPtr& neg = f->rhs;
    REQUIRE(neg->kind == FormulaKind::implies);  // not sugar
    CHECK(neg->lhs->kind == FormulaKind::exists_so);
    std::string text = print_formula(f);
    CHECK(text.find("not existsP") != std::string::npos);
    CHECK(text.find("P(V1) -> p(V1)") != std::string::npos);
    CHECK(text.find("p(V1) -> P(V1)") != std::string::npos);
}
