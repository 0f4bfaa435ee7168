#include <benchmark/benchmark.h>

#include <random>

#include "modkcsp/affine.hpp"
#include "modkcsp/gadgets.hpp"
#include "modkcsp/implement.hpp"

using namespace modkcsp;

namespace {

Formula random_3cnf(std::mt19937& rng, int num_vars, int num_clauses) {
    std::vector<std::string> vars;
    for (int i = 0; i < num_vars; ++i) vars.push_back("x" + std::to_string(i + 1));
    Formula f(vars);
    std::uniform_int_distribution<int> var_dist(0, num_vars - 1);
    std::bernoulli_distribution sign;
    for (int c = 0; c < num_clauses; ++c) {
        Bits neg_mask = 0;
        std::vector<std::string> args;
        for (int j = 0; j < 3; ++j) {
            neg_mask = (neg_mask << 1) | static_cast<Bits>(sign(rng));
            args.push_back(vars[static_cast<size_t>(var_dist(rng))]);
        }
        f.add_constraint(clause_relation(3, neg_mask), args);
    }
    return f;
}

void BM_BruteForceCount(benchmark::State& state) {
    std::mt19937 rng(42);
    int n = static_cast<int>(state.range(0));
    Formula f = random_3cnf(rng, n, 4 * n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_count(f, n));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BruteForceCount)->DenseRange(14, 22, 2)->Complexity();

void BM_AffineCount(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) vars.push_back("v" + std::to_string(i + 1));
    Formula f(vars);
    const Relation& xr = builtin_relations().at("XOR");
    for (int i = 0; i + 1 < n; ++i)
        f.add_constraint(xr, {vars[static_cast<size_t>(i)], vars[static_cast<size_t>(i + 1)]});
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_affine_mod(f, Modulus(7)));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AffineCount)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_CountIndependentSetsBipartite(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Graph g;
    for (int i = 0; i < 2 * n; ++i) g.add_vertex("v" + std::to_string(i));
    for (int u = 0; u < n; ++u)
        for (int v = n; v < 2 * n; ++v) g.add_edge(u, v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_is(g));
    }
}
BENCHMARK(BM_CountIndependentSetsBipartite)->DenseRange(8, 16, 2);

void BM_CountIndependentSetsSparse(benchmark::State& state) {
    std::mt19937 rng(7);
    int n = static_cast<int>(state.range(0));
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    std::bernoulli_distribution edge(3.0 / n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (edge(rng)) g.add_edge(u, v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_is(g, 63));
    }
}
BENCHMARK(BM_CountIndependentSetsSparse)->DenseRange(30, 60, 10);

void BM_ParityGadgetPipeline(benchmark::State& state) {
    std::mt19937 rng(11);
    Formula cnf = random_3cnf(rng, 6, 4);
    for (auto _ : state) {
        auto [g, dec] = parity_gadget(cnf);
        benchmark::DoNotOptimize(count_is_mod(g, Modulus(2)));
    }
}
BENCHMARK(BM_ParityGadgetPipeline);

void BM_PrimeGadgetPipeline(benchmark::State& state) {
    std::mt19937 rng(13);
    Formula cnf = random_3cnf(rng, 3, 2);
    std::uint64_t p = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        PrimeGadgetOutput out = prime_gadget(cnf, p);
        std::uint64_t residue =
            decomposition_count_mod(out.graph, out.decomposition, Modulus(p));
        benchmark::DoNotOptimize(recover_sat_count_mod_p(out, residue));
    }
}
BENCHMARK(BM_PrimeGadgetPipeline)->Arg(2)->Arg(3)->Arg(5)->Arg(7);

void BM_ImplementationSearchHit(benchmark::State& state) {
    RelationSet S;
    insert_relation(S, builtin_relations().at("NAE3"));
    const TargetFunction& target = builtin_relations().at("XOR");
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_implementation(S, target));
    }
}
BENCHMARK(BM_ImplementationSearchHit);

void BM_ImplementationSearchExhaust(benchmark::State& state) {
    RelationSet S;
    insert_relation(S, builtin_relations().at("XOR"));
    const TargetFunction& target = builtin_relations().at("OR0");
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_implementation(S, target));
    }
}
BENCHMARK(BM_ImplementationSearchExhaust);

}  // namespace

BENCHMARK_MAIN();
