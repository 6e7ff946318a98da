#include <benchmark/benchmark.h>

#include "lorlab/causality.hpp"
#include "lorlab/distance.hpp"
#include "lorlab/reach.hpp"
#include "lorlab/scenario.hpp"
#include "lorlab/surface.hpp"

using namespace lorlab;

namespace {

Grid grid_for(const Scenario& sc, double h) {
  GridSpec spec;
  spec.h = h;
  return build_grid(sc.model, spec);
}

void bench_build_grid(benchmark::State& state) {
  static Scenario sc = make_scenario("flat_slit");
  double h = 1.0 / state.range(0);
  for (auto _ : state) {
    Grid g = grid_for(sc, h);
    benchmark::DoNotOptimize(g.num_nodes());
  }
}
BENCHMARK(bench_build_grid)->Arg(10)->Arg(20);

void bench_flood(benchmark::State& state) {
  static Scenario sc = make_scenario("flat_slit");
  Grid g = grid_for(sc, 1.0 / state.range(0));
  for (auto _ : state) {
    FloodResult fr = flood_point(g, {0.0, 0.0}, true);
    benchmark::DoNotOptimize(fr.chron.size());
  }
}
BENCHMARK(bench_flood)->Arg(10)->Arg(20);

void bench_distance_flat(benchmark::State& state) {
  static Scenario sc = make_scenario("flat_slit");
  Grid g = grid_for(sc, 1.0 / state.range(0));
  DistanceOptions opt;
  opt.want_witness = false;
  for (auto _ : state) {
    DistanceResult r = grid_distance(g, {0.0, 0.0}, {0.0, 4.0}, opt);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bench_distance_flat)->Arg(10)->Arg(20);

void bench_distance_winding(benchmark::State& state) {
  static Scenario sc = make_scenario("cylinder_double_cut");
  Grid g = grid_for(sc, 1.0 / state.range(0));
  DistanceOptions opt;
  opt.want_witness = false;
  for (auto _ : state) {
    DistanceResult r = grid_distance(g, {0.0, -0.1}, {-2.0, 0.2}, opt);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bench_distance_winding)->Arg(10);

void bench_surface_field(benchmark::State& state) {
  static Scenario sc = make_scenario("flat_slit");
  Grid g = grid_for(sc, 1.0 / state.range(0));
  BoundaryCurve S = boundary_construct(g, {0.0, 0.0}, {0.0, 4.0});
  for (auto _ : state) {
    SurfaceField f = surface_function_field(g, S);
    benchmark::DoNotOptimize(f.max_jump);
  }
}
BENCHMARK(bench_surface_field)->Arg(10)->Arg(20);

void bench_ladder(benchmark::State& state) {
  static Scenario sc = make_scenario("cylinder_stacked_slits");
  Grid g = grid_for(sc, 0.1);
  LadderOptions opt;
  opt.outer_probes = sc.miss_probes;
  for (auto _ : state) {
    LadderReport lr = ladder_report(g, opt);
    benchmark::DoNotOptimize(lr.flags.stably_causal);
  }
}
BENCHMARK(bench_ladder);

}  // namespace

BENCHMARK_MAIN();
