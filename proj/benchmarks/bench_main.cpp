#include <benchmark/benchmark.h>

#include <cmath>

#include "jdl/catalog.hpp"
#include "jdl/dualpair.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/leaves.hpp"
#include "jdl/suite.hpp"

using namespace jdl;

namespace {

void BM_JetProduct(benchmark::State& st) {
  const int order = static_cast<int>(st.range(0));
  const Coords p{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto xs = variables(p, order);
  for (auto _ : st) {
    Jet a = xs[0] * xs[1] + sin(xs[2]) * exp(xs[3] * xs[4]);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_JetProduct)->DenseRange(1, 3);

void BM_JacobiResidual(benchmark::State& st) {
  const JacobiPair J = lie_poisson(so3());
  const Coords p{0.3, -0.2, 0.5};
  for (auto _ : st) benchmark::DoNotOptimize(jacobi_pair_residual(J, p));
}
BENCHMARK(BM_JacobiResidual);

void BM_VerifyDualPair(benchmark::State& st) {
  const DualPairSpec& dp = catalog::get("triv-gpd").dual_pairs.at(0);
  const auto pts = sample_points(dp.source.chart, 20, 1);
  for (auto _ : st) benchmark::DoNotOptimize(verify_dual_pair(dp, pts));
}
BENCHMARK(BM_VerifyDualPair)->Unit(benchmark::kMillisecond);

void BM_LeafTrace(benchmark::State& st) {
  const JacobiPair J = lie_poisson(so3());
  for (auto _ : st) benchmark::DoNotOptimize(leaf_trace(J, {0.3, -0.2, 0.5}));
}
BENCHMARK(BM_LeafTrace)->Unit(benchmark::kMillisecond);

void BM_SuiteAll(benchmark::State& st) {
  const CatalogEntry& e = catalog::get(st.range(0) ? "hopf" : "darboux3");
  SuiteOptions o;
  o.samples = 25;
  for (auto _ : st) benchmark::DoNotOptimize(run_suite("all", e, o));
}
BENCHMARK(BM_SuiteAll)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
