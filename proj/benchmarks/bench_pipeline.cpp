#include <benchmark/benchmark.h>

#include "peeragree/pipeline.hpp"
#include "peeragree/resampling.hpp"
#include "peeragree/synth.hpp"

using namespace peeragree;

namespace {

Corpus desk_corpus(std::size_t institutions) {
    SynthConfig cfg;
    cfg.seed = 1;
    cfg.n_institutions = institutions;
    cfg.pubs_per_institution.constant = 58;
    return generate(cfg);
}

void BM_Generate(benchmark::State& state) {
    SynthConfig cfg;
    cfg.n_institutions = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 58);
}
BENCHMARK(BM_Generate)->Arg(78)->Arg(312)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
    const auto prepared = prepare(desk_corpus(static_cast<std::size_t>(state.range(0))), {}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(prepared.corpus, {}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(prepared.corpus.records.size()));
}
BENCHMARK(BM_Evaluate)->Arg(78)->Arg(312)->Unit(benchmark::kMillisecond);

void BM_BootstrapReplicates(benchmark::State& state) {
    const auto prepared = prepare(desk_corpus(78), {}, 1);
    BootstrapConfig cfg;
    cfg.n_replicates = static_cast<std::size_t>(state.range(0));
    cfg.seed = 7;
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap(prepared.corpus, {}, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BootstrapReplicates)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Resample(benchmark::State& state) {
    const auto prepared = prepare(desk_corpus(78), {}, 1);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(resample_within_areas(prepared.corpus, 3, k++));
}
BENCHMARK(BM_Resample)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
