#include <benchmark/benchmark.h>

#include "sgr/rewiring.hpp"
#include "sgr/sparsify.hpp"
#include "sgr/spectral.hpp"

namespace {

using namespace sgr;

Graph er(std::size_t n) { return gen_er(n, 0.4, 7); }

void bm_sym_eig(benchmark::State& state) {
    Matrix l = laplacian(er(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sym_eig(l));
}
BENCHMARK(bm_sym_eig)->Arg(16)->Arg(32)->Arg(64);

void bm_resistance_matrix(benchmark::State& state) {
    Graph g = er(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(resistance_matrix(g));
}
BENCHMARK(bm_resistance_matrix)->Arg(16)->Arg(32)->Arg(64);

void bm_spectral_cte(benchmark::State& state) {
    Graph g = er(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectral_cte(g));
}
BENCHMARK(bm_spectral_cte)->Arg(16)->Arg(32)->Arg(64);

void bm_ct_layer_forward(benchmark::State& state) {
    Graph g = er(state.range(0));
    CTLayerConfig cfg;
    ParameterSet params = init_ct_params(cfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ct_layer_forward(g, params, cfg));
}
BENCHMARK(bm_ct_layer_forward)->Arg(16)->Arg(32);

void bm_gap_layer_forward(benchmark::State& state) {
    Graph g = er(state.range(0));
    GapLayerConfig cfg;
    ParameterSet params = init_gap_params(cfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(gap_layer_forward(g, params, cfg));
}
BENCHMARK(bm_gap_layer_forward)->Arg(16)->Arg(32);

void bm_greedy_sparsify(benchmark::State& state) {
    Graph g = er(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(greedy_sparsify(g, 0.9));
}
BENCHMARK(bm_greedy_sparsify)->Arg(16)->Arg(32);

void bm_sample_sparsify(benchmark::State& state) {
    Graph g = er(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_sparsify(g, 0.9, 3));
}
BENCHMARK(bm_sample_sparsify)->Arg(16)->Arg(32);

void bm_gen_er(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(gen_er(state.range(0), 0.4, seed++));
}
BENCHMARK(bm_gen_er)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
