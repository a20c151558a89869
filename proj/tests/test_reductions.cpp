#include <doctest.h>

#include "masp/analysis.hpp"
#include "masp/evaluator.hpp"
#include "masp/printer.hpp"
#include "masp/reductions.hpp"
#include "masp/transform.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace masp;
using namespace masp::test;

namespace {

// combined closure-plus-connectivity def-module (the rules of Pi_cn in one)
DefModule cn_combined() {
    DefModule m = m3_closure();
    m.rules.push_back(den_connectivity().rules[0]);
    return m;
}

std::vector<Interpretation> sm_models(const DefModule& m, const Domain& dom) {
    return herbrand_models(sm(m.intensional, rules_formula(m)), predicates_of(m), dom);
}

}  // namespace

TEST_CASE("extract_denials") {
    SUBCASE("splits the connectivity denial off the closure rules") {
        auto [kept, denials] = extract_denials(cn_combined());
        CHECK(kept == m3_closure());
        CHECK(equal(denials, rule_to_formula(den_connectivity().rules[0])));
    }
    SUBCASE("a denial-free module keeps everything and yields top") {
        auto [kept, denials] = extract_denials(m3_closure());
        CHECK(kept == m3_closure());
        CHECK(is_top(denials));
    }
    SUBCASE("a denial-only module keeps nothing") {
        auto [kept, denials] = extract_denials(den_functional());
        CHECK(kept.rules.empty());
        CHECK(!is_top(denials));
    }
}

TEST_CASE("denial extraction preserves models") {
    Domain dom = Domain::of({"a", "b"});
    auto m = cn_combined();
    auto [kept, denials] = extract_denials(m);
    auto lhs = sm_models(m, dom);
    auto rhs = herbrand_models(mk_and(sm(kept.intensional, rules_formula(kept)), denials),
                               predicates_of(m), dom);
    CHECK(lhs == rhs);
}

TEST_CASE("clark normal form") {
    SUBCASE("facts become equality disjunctions") {
        auto m = edge_instance({{"a", "b"}, {"b", "c"}});
        FormulaPtr cnf = clark_normal_form(m);
        FormulaPtr expect = mk_forall(
            "X",
            mk_forall("Y", mk_implies(mk_or(mk_and(mk_equal(v("X"), c("a")),
                                                   mk_equal(v("Y"), c("b"))),
                                            mk_and(mk_equal(v("X"), c("b")),
                                                   mk_equal(v("Y"), c("c")))),
                                      mk_atom({"edge", 2}, {v("X"), v("Y")}))));
        CHECK(equal(cnf, expect));
    }
    SUBCASE("projection rules share the canonical head variable") {
        FormulaPtr cnf = clark_normal_form(m1_vertex());
        // forall X (exists Y (edge(X,Y)) | exists Y (edge(Y,X)) -> vertex(X))
        FormulaPtr expect = mk_forall(
            "X", mk_implies(mk_or(mk_exists("Y", mk_atom({"edge", 2}, {v("X"), v("Y")})),
                                  mk_exists("Y", mk_atom({"edge", 2}, {v("Y"), v("X")}))),
                            mk_atom({"vertex", 1}, {v("X")})));
        CHECK(equal(cnf, expect));
    }
    SUBCASE("a ruleless intensional predicate is defined by bottom") {
        DefModule m;
        m.intensional = {{"p", 1}};
        FormulaPtr cnf = clark_normal_form(m);
        CHECK(equal(cnf, mk_forall("X", mk_implies(mk_bottom(),
                                                   mk_atom({"p", 1}, {v("X")})))));
    }
}

TEST_CASE("completion") {
    Domain dom3 = Domain::of({"a", "b", "c"});
    SUBCASE("fact module completes and matches sm model-for-model") {
        auto m = edge_instance({{"a", "b"}, {"b", "c"}, {"c", "a"}});
        auto res = completion(m);
        REQUIRE(res.applicable);
        auto classical = herbrand_models(res.residual, predicates_of(m), dom3);
        CHECK(classical == sm_models(m, dom3));
        REQUIRE(classical.size() == 1);
        CHECK(classical[0].to_text() == "edge(a,b) edge(b,c) edge(c,a)");
    }
    SUBCASE("choice module completes") {
        auto res = completion(m2_choice());
        REQUIRE(res.applicable);
        CHECK(herbrand_models(res.residual, predicates_of(m2_choice()), dom3) ==
              sm_models(m2_choice(), dom3));
    }
    SUBCASE("the closure module is not tight") {
        auto res = completion(m3_closure());
        CHECK(!res.applicable);
        CHECK(res.reason.find("not tight") == 0);
        CHECK(res.residual == nullptr);
    }
}

TEST_CASE("reduce_choice") {
    SUBCASE("the guess module reverses into the subset implication") {
        auto res = reduce_choice(m2_choice());
        REQUIRE(res.applicable);
        CHECK(print_formula(res.residual) == "forall X Y (in(X,Y) -> edge(X,Y))");
    }
    SUBCASE("agrees with completion whenever both apply") {
        Domain dom = Domain::of({"a", "b"});
        auto choice = reduce_choice(m2_choice());
        auto comp = completion(m2_choice());
        REQUIRE(choice.applicable);
        REQUIRE(comp.applicable);
        CHECK(herbrand_models(choice.residual, predicates_of(m2_choice()), dom) ==
              herbrand_models(comp.residual, predicates_of(m2_choice()), dom));
    }
    SUBCASE("non-choice module is inapplicable") {
        auto res = reduce_choice(m1_vertex());
        CHECK(!res.applicable);
        CHECK(!res.reason.empty());
    }
    SUBCASE("an extra rule for the predicate blocks the rewrite") {
        auto m = m2_choice();
        Rule extra;
        extra.head = {atom("in", {v("X"), v("X")})};
        extra.positive_body = {atom("edge", {v("X"), v("X")})};
        m.rules.push_back(extra);
        auto res = reduce_choice(m);
        CHECK(!res.applicable);
    }
}

TEST_CASE("circumscribe") {
    SUBCASE("closure of a fixed relation equals the independent oracle") {
        Domain dom = Domain::of({"a", "b", "c"});
        Interpretation fixed{dom, {}};
        fixed.add({"in", 2}, {"a", "b"});
        fixed.add({"in", 2}, {"b", "c"});
        auto ms = circumscribe(m3_closure(), dom, fixed);
        REQUIRE(ms.size() == 1);
        auto tc = transitive_closure({{"a", "b"}, {"b", "c"}}, dom.constants);
        std::set<Tuple> expect;
        for (const auto& [x, y] : tc) expect.insert({x, y});
        CHECK(ms[0].extents.at({"r", 2}) == expect);
    }
    SUBCASE("an empty module has the empty minimal model") {
        DefModule m;
        m.intensional = {{"p", 1}};
        Domain dom = Domain::of({"a"});
        auto ms = circumscribe(m, dom, Interpretation{dom, {}});
        REQUIRE(ms.size() == 1);
        CHECK(ms[0].atom_count() == 0);
    }
    SUBCASE("negation is rejected with the offending rule named") {
        CHECK_THROWS_WITH_AS(circumscribe(den_connectivity(), Domain::of({"a"}), {}),
                             "circumscription requires negation-free rules; offending rule: "
                             ":- vertex(X), vertex(Y), not r(X,Y).",
                             error);
        CHECK(!circumscription_applicability(m2_choice()).applicable);
        CHECK(circumscription_applicability(m3_closure()).applicable);
    }
    SUBCASE("matches the stable-model oracle on random relations") {
        Rng rng(424242);
        Domain dom = Domain::of({"a", "b", "c"});
        for (int i = 0; i < 20; ++i) {
            Interpretation fixed{dom, {}};
            for (const auto& x : dom.constants)
                for (const auto& y : dom.constants)
                    if (rng.chance(35)) fixed.add({"in", 2}, {x, y});
            fixed.extents.emplace(PredicateSymbol{"in", 2}, std::set<Tuple>{});
            auto circ = circumscribe(m3_closure(), dom, fixed);
            auto stable =
                naive_stable_models(rules_formula(m3_closure()), {{"r", 2}}, dom, fixed);
            CHECK(circ == stable);
        }
    }
}

TEST_CASE("completion models equal sm models on every tight corpus def-module") {
    // the domain must contain the module's own constants, or the equality
    // rewrite and the facts diverge
    for (const auto& m : defmods(pi1_of(g1_edges()))) {
        if (!is_tight(m) || m.intensional.empty()) continue;
        std::vector<std::string> cs = {"a", "b"};
        for (const auto& c0 : constants_of(m)) cs.push_back(c0);
        Domain dom = Domain::of(cs);
        auto res = completion(m);
        REQUIRE(res.applicable);
        CHECK(herbrand_models(res.residual, predicates_of(m), dom) == sm_models(m, dom));
    }
}

TEST_CASE("random denial modules preserve models under extraction") {
    Rng rng(99991);
    Domain dom = Domain::of({"a", "b"});
    for (int i = 0; i < 12; ++i) {
        auto m = random_denial_module(rng);
        auto [kept, denials] = extract_denials(m);
        auto lhs = sm_models(m, dom);
        auto rhs = herbrand_models(mk_and(sm(kept.intensional, rules_formula(kept)), denials),
                                   predicates_of(m), dom);
        CHECK(lhs == rhs);
    }
}
