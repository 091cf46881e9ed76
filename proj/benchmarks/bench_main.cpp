#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "doa/bench.hpp"

namespace {

using namespace doa;

NoiseProjector make_projector(int elements, double snr_db) {
    const auto geom = ArrayGeometry::uniform_circular(elements);
    const auto sources = SourceSet::from_degrees({30.42, 120.27, 240.51}, {60.39, 29.42, 45.55});
    const auto x = synthesize_snapshots(geom, sources, snr_db, 100, 7);
    return NoiseProjector(geom, subspace_split(sample_covariance(x), sources.count()));
}

void BM_MusicValue(benchmark::State& state) {
    const auto proj = make_projector(static_cast<int>(state.range(0)), 10.0);
    double az = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(music_value(proj, az, 0.7));
        az += 1e-3;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MusicValue)->Arg(12)->Arg(32)->Arg(128);

void BM_SubspaceSplit(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto geom = ArrayGeometry::uniform_circular(m);
    const auto sources = SourceSet::from_degrees({30.42, 120.27, 240.51}, {60.39, 29.42, 45.55});
    const auto r = sample_covariance(synthesize_snapshots(geom, sources, 10.0, 100, 7));
    for (auto _ : state) benchmark::DoNotOptimize(subspace_split(r, 3));
}
BENCHMARK(BM_SubspaceSplit)->Arg(12)->Arg(32);

void BM_GridSearch(benchmark::State& state) {
    const auto proj = make_projector(12, 10.0);
    const GridSpec grid;
    for (auto _ : state) benchmark::DoNotOptimize(grid_search(proj, grid, 3));
    state.SetItemsProcessed(state.iterations() * grid.points());
}
BENCHMARK(BM_GridSearch)->Unit(benchmark::kMillisecond);

void BM_DenmRun(benchmark::State& state) {
    const auto proj = make_projector(12, 10.0);
    constexpr double k = std::numbers::pi / 180.0;
    const Objective f = [&](const Point& p) { return music_value(proj, p.theta * k, p.phi * k); };
    DEConfig cfg;
    cfg.population_size = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(denm_run(f, SearchBox{}, cfg));
}
BENCHMARK(BM_DenmRun)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(0.0, 360.0), p(0.0, 90.0);
    std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
    for (auto& q : pts) q = {t(rng), p(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(dbscan(pts, 3.0, 4));
}
BENCHMARK(BM_Dbscan)->Arg(256)->Arg(1024);

void BM_Trial(benchmark::State& state) {
    bench::Scenario s;
    s.algorithm = state.range(0) ? Algorithm::DENM : Algorithm::Grid;
    int i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(bench::run_trial(s, 10.0, i++));
}
BENCHMARK(BM_Trial)->ArgName("denm")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
