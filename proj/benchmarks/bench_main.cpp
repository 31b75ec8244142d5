#include <benchmark/benchmark.h>

#include <random>

#include "edpc/bench.hpp"
#include "edpc/compile.hpp"
#include "edpc/paths.hpp"
#include "edpc/swap_route.hpp"
#include "edpc/verify.hpp"

using namespace edpc;

namespace {

std::vector<TerminalPair> random_pairs(const GridGraph& g, int count,
                                       uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto blacks = g.black_vertices();
    for (size_t k = blacks.size(); k > 1; --k)
        std::swap(blacks[k - 1], blacks[rng() % k]);
    std::vector<TerminalPair> out;
    for (int k = 0; k < count; ++k)
        out.push_back({blacks[2 * k], blacks[2 * k + 1]});
    return out;
}

}  // namespace

static void BM_GreedyMaxEdp(benchmark::State& state) {
    int L = static_cast<int>(state.range(0));
    GridGraph g = build_grid(L);
    auto terms = random_pairs(g, (L / 2) * (L / 2) / 2, 7);
    for (auto _ : state) {
        OperatorGraph og = build_operator_graph(g, terms);
        auto [set, connected] = greedy_max_edp(og, terms);
        benchmark::DoNotOptimize(set.paths.size());
    }
}
BENCHMARK(BM_GreedyMaxEdp)->Arg(9)->Arg(13)->Arg(17)->Arg(25);

static void BM_FragmentEdp(benchmark::State& state) {
    int L = static_cast<int>(state.range(0));
    GridGraph g = build_grid(L);
    auto terms = random_pairs(g, (L / 2) * (L / 2) / 2, 11);
    OperatorGraph og = build_operator_graph(g, terms);
    auto [set, connected] = greedy_max_edp(og, terms);
    for (auto _ : state) {
        Fragmentation f = fragment_edp(g, set);
        benchmark::DoNotOptimize(f.segments.size());
    }
}
BENCHMARK(BM_FragmentEdp)->Arg(9)->Arg(17);

static void BM_RoutePermutation(benchmark::State& state) {
    int side = static_cast<int>(state.range(0));
    LogicalCircuit c;
    c.n_logical = side * side;
    SwapLayout lay = build_swap_layout(c, side, side);
    std::mt19937_64 rng(3);
    std::vector<Site> sites;
    for (int r = 1; r <= side; ++r)
        for (int cc = 1; cc <= side; ++cc) sites.push_back({r, cc});
    auto to = sites;
    for (size_t k = to.size(); k > 1; --k) std::swap(to[k - 1], to[rng() % k]);
    std::map<Site, Site> pi;
    for (size_t k = 0; k < sites.size(); ++k) pi[sites[k]] = to[k];
    for (auto _ : state) {
        auto rounds = route_permutation(lay, pi);
        benchmark::DoNotOptimize(rounds.size());
    }
}
BENCHMARK(BM_RoutePermutation)->Arg(4)->Arg(8)->Arg(12);

static void BM_CompileEdpcRandom(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    LogicalCircuit c = bench::gen_random_parallel_cnots(n, n - n % 2, 10, 5);
    for (auto _ : state) {
        CompileResult res = compile_edpc(c);
        benchmark::DoNotOptimize(res.cost.spacetime);
    }
}
BENCHMARK(BM_CompileEdpcRandom)->Arg(16)->Arg(36)->Arg(64);

static void BM_VerifySample(benchmark::State& state) {
    LogicalCircuit c = bench::gen_random_clifford(9, 8, 21);
    CompileResult res = compile_edpc(c);
    uint64_t seed = 0;
    for (auto _ : state) {
        StabilizerState st(res.schedule.layout, ++seed);
        st.run(res.schedule);
        benchmark::DoNotOptimize(st.outcome_bits().size());
    }
}
BENCHMARK(BM_VerifySample);

BENCHMARK_MAIN();
