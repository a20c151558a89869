// google-benchmark suite over the hot paths: splitting enumeration, the
// naive oracle, formula evaluation, bounded equivalence, and the parser.

#include <benchmark/benchmark.h>

#include "masp/analysis.hpp"
#include "masp/equivalence.hpp"
#include "masp/evaluator.hpp"
#include "masp/parser.hpp"
#include "masp/printer.hpp"
#include "masp/transform.hpp"
#include "support/corpus.hpp"

using namespace masp;
using namespace masp::test;

namespace {

void BM_SolveG1(benchmark::State& state) {
    auto prog = pi1_of(g1_edges());
    SolveOptions opts;
    for (auto _ : state) {
        auto as = answer_sets(prog, std::nullopt, opts);
        benchmark::DoNotOptimize(as);
    }
}
BENCHMARK(BM_SolveG1);

void BM_SolveCompleteDigraph(benchmark::State& state) {
    std::set<Edge> edges;
    const std::vector<std::string> names = {"a", "b", "c", "d"};
    int n = static_cast<int>(state.range(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                edges.insert({names[static_cast<size_t>(i)], names[static_cast<size_t>(j)]});
    auto prog = pi1_of(edges);
    SolveOptions opts;
    for (auto _ : state) {
        auto as = answer_sets(prog, std::nullopt, opts);
        benchmark::DoNotOptimize(as);
    }
}
BENCHMARK(BM_SolveCompleteDigraph)->Arg(3)->Arg(4);

void BM_NaiveOracle(benchmark::State& state) {
    auto prog = pi1_of({{"a", "b"}, {"b", "a"}});
    SolveOptions opts;
    opts.strategy = SolveOptions::Strategy::naive;
    for (auto _ : state) {
        auto as = answer_sets(prog, std::nullopt, opts);
        benchmark::DoNotOptimize(as);
    }
}
BENCHMARK(BM_NaiveOracle);

void BM_PhiEvaluation(benchmark::State& state) {
    auto prog = pi1_of(g1_edges());
    FormulaPtr f = phi(prog);
    Interpretation cycle{herbrand_universe(prog, std::nullopt), {}};
    for (const auto& [x, y] : std::set<Edge>{{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}})
        cycle.add({"in", 2}, {x, y});
    for (auto _ : state) {
        bool v = evaluate(f, cycle);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_PhiEvaluation);

void BM_StrongEquivalence(benchmark::State& state) {
    auto a = load_corpus_program("hc_sub.masp");
    auto b = load_corpus_program("hc_sub_alt.masp");
    ContextTheory gamma;
    gamma.sentences.push_back(mk_atom({"vertex", 1}, {Term::constant("a")}));
    Domain bound = Domain::of({"a", "b", "c"});
    for (auto _ : state) {
        auto v = strong_equiv_bounded(a, b, gamma, bound);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_StrongEquivalence);

void BM_ParsePrintRoundtrip(benchmark::State& state) {
    auto src = load_source(corpus_path("hc.masp"), SourceUnit::Kind::program);
    for (auto _ : state) {
        auto res = parse_program(src);
        auto text = print_program(*res.program);
        benchmark::DoNotOptimize(text);
    }
}
BENCHMARK(BM_ParsePrintRoundtrip);

void BM_Flatten(benchmark::State& state) {
    auto prog = pi1_of(g1_edges());
    for (auto _ : state) {
        auto flat = flatten(prog);
        benchmark::DoNotOptimize(flat);
    }
}
BENCHMARK(BM_Flatten);

}  // namespace

BENCHMARK_MAIN();
