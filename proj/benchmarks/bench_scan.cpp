#include <benchmark/benchmark.h>

#include "sil/cij.hpp"
#include "sil/models.hpp"

using namespace sil;

namespace {

const char* kGolden =
    "0.61803398874989484820458683436563811772030917980576";

PathGerm golden_germ() {
    return PathGerm{
        2,
        NormalForm({BlockN1{1, 1},
                    BlockR{RotationNumber::irrational(kGolden, 50, "g.1")}}),
        "g"};
}

void BM_IndexAt(benchmark::State& state) {
    PathGerm g = golden_germ();
    long m = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index_at(g, m));
        m = m % 100000 + 1;
    }
}
BENCHMARK(BM_IndexAt);

void BM_IterateWalker(benchmark::State& state) {
    PathGerm g = golden_germ();
    IterateWalker w(g);
    for (auto _ : state) benchmark::DoNotOptimize(w.next());
}
BENCHMARK(BM_IterateWalker);

void BM_ScanThroughput(benchmark::State& state) {
    JumpInstance inst = JumpInstance::make({golden_germ()}, 2, {}, Rat(1, 20));
    ScanOptions opts;
    opts.eps = Rat(1, 1000);
    Int start = 1;
    for (auto _ : state) {
        opts.start = start;
        opts.scan_limit = state.range(0);
        auto res = solve_paths(inst, 1000000000, opts);
        benchmark::DoNotOptimize(res.found.size());
        start += opts.scan_limit;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScanThroughput)->Arg(1 << 16)->Arg(1 << 20);

void BM_EllipsoidBuild(benchmark::State& state) {
    EllipsoidSpec spec;
    spec.axes.push_back(AxisValue::from_rat(Rat(1)));
    spec.axes.push_back(AxisValue::from_decimal(
        "1.61803398874989484820458683436563811772030917980576", 50));
    for (auto _ : state) benchmark::DoNotOptimize(ellipsoid(spec).n());
}
BENCHMARK(BM_EllipsoidBuild);

} // namespace

BENCHMARK_MAIN();
