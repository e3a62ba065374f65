#include <benchmark/benchmark.h>

#include "relunif/admissibility.hpp"
#include "relunif/enumerate.hpp"
#include "relunif/prover.hpp"
#include "relunif/sweep.hpp"
#include "relunif/syntax.hpp"

using namespace relunif;

namespace {

const std::vector<Formula>& level(unsigned s) {
    static FormulaLevels levels(parse_atoms("x,y"));
    return levels.level(s);
}

const ModelBank& bank() {
    static ModelBank b(parse_atoms("x,y"), 4);
    return b;
}

void BM_RefutersSerial(benchmark::State& st) {
    const auto& fs = level(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(refuters_serial(bank(), fs));
    st.SetItemsProcessed(st.iterations() * fs.size());
}

void BM_RefutersParallel(benchmark::State& st) {
    const auto& fs = level(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(refuters_parallel(bank(), fs));
    st.SetItemsProcessed(st.iterations() * fs.size());
}

void BM_TheoremsSerial(benchmark::State& st) {
    const auto& fs = level(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        clear_prover_cache();
        benchmark::DoNotOptimize(theorems_serial(fs));
    }
    st.SetItemsProcessed(st.iterations() * fs.size());
}

void BM_TheoremsParallel(benchmark::State& st) {
    const auto& fs = level(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        clear_prover_cache();
        benchmark::DoNotOptimize(theorems_parallel(fs));
    }
    st.SetItemsProcessed(st.iterations() * fs.size());
}

void BM_FalsifySerial(benchmark::State& st) {
    const Formula a = parse("~x -> y | z"), b = parse("(~x -> y) | (~x -> z)");
    for (auto _ : st) benchmark::DoNotOptimize(falsify_admissible_serial(a, b));
}

void BM_FalsifyParallel(benchmark::State& st) {
    const Formula a = parse("~x -> y | z"), b = parse("(~x -> y) | (~x -> z)");
    for (auto _ : st) benchmark::DoNotOptimize(falsify_admissible(a, b));
}

}  // namespace

BENCHMARK(BM_RefutersSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RefutersParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheoremsSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheoremsParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FalsifySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FalsifyParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
