#include "corners/io.hpp"
#include "corners/quotient.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <set>

using namespace corners;

namespace {

CornerComplex pentagon_pair() {
    return read_tessellation_file(std::string(CORNERS_FIXTURE_DIR) + "/pentagon-pair.tess").build();
}

// n right-angled 120-cells in a row; each one is left through a facet disjoint from its entry facet.
CornerComplex chain_120(int n) {
    const auto p = catalog_load("120cell");
    auto ridges = [&](int f) {
        const auto v = p->faces_of(3, f, 2);
        return std::set<int>(v.begin(), v.end());
    };
    const auto r0 = ridges(0);
    int far = 1;
    while (std::ranges::any_of(ridges(far), [&](int x) { return r0.count(x) > 0; })) ++far;
    std::vector<Gluing> gl;
    for (int i = 0; i + 1 < n; ++i) {
        const int out = i == 0 ? 0 : far;
        gl.push_back({{i, out}, {i + 1, 0}, all_isomorphisms(p, {3, out}, p, {3, 0}).front()});
    }
    return CornerComplex::build(std::vector<PolytopePtr>(n, p), gl);
}

void BM_pentagon_pipeline(benchmark::State& state) {
    const auto w = pentagon_pair();
    for (auto _ : state) {
        const auto r = find_colouring(adjacency_graph(w), 3);
        const auto q = build_quotient(w, lift(*r.colouring));
        benchmark::DoNotOptimize(betti(q.chain, Field::rational).b);
    }
}

void BM_build_120_chain(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(chain_120(n).facets().size());
}

void BM_colour_120_chain(benchmark::State& state) {
    const auto w = chain_120(static_cast<int>(state.range(0)));
    const auto g = adjacency_graph(w);
    for (auto _ : state) benchmark::DoNotOptimize(find_colouring(g, 5).status);
}

void BM_quotient_120_chain(benchmark::State& state) {
    const auto w = chain_120(static_cast<int>(state.range(0)));
    const auto r = find_colouring(adjacency_graph(w), 5);
    if (r.status != SearchStatus::found) {
        state.SkipWithError("no 5-colouring");
        return;
    }
    const auto rho = lift(*r.colouring);
    for (auto _ : state) benchmark::DoNotOptimize(build_quotient(w, rho).euler_characteristic());
}

void BM_betti_120_chain(benchmark::State& state) {
    const auto w = chain_120(3);
    const auto q = build_quotient(w, lift(*find_colouring(adjacency_graph(w), 5).colouring));
    const bool fast = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(betti(q.chain, Field::rational, fast).b);
}

}  // namespace

BENCHMARK(BM_pentagon_pipeline)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_build_120_chain)->Arg(1)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_colour_120_chain)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_quotient_120_chain)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_betti_120_chain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
