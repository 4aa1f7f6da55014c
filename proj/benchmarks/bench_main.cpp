#include <benchmark/benchmark.h>

#include "cesscm/estimators.hpp"
#include "cesscm/mc_verify.hpp"
#include "cesscm/presets.hpp"
#include "cesscm/sampler.hpp"
#include "cesscm/theory.hpp"

using namespace cesscm;

static void BM_SampleCes(benchmark::State& state) {
  const Index p = state.range(0);
  const CESModel model(ComplexVector::Zero(p), random_covariance(p, 1),
                       DistributionFamily::parse("t:6"));
  std::uint64_t id = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_ces(model, 100, RngStream{7, id++}));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SampleCes)->Arg(2)->Arg(8)->Arg(32);

static void BM_Scm(benchmark::State& state) {
  const Index p = state.range(0);
  const Dataset x = sample_ces(CESModel::spherical(p, DistributionFamily::gaussian()), 200,
                               RngStream{3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(scm(x));
}
BENCHMARK(BM_Scm)->Arg(2)->Arg(8)->Arg(32);

static void BM_AffineEquivariantVar(benchmark::State& state) {
  const Index p = state.range(0);
  const HermitianMatrix m = random_covariance(p, 5);
  const RadialStructure s = scm_radial_structure(10, 0.5, p);
  for (auto _ : state) benchmark::DoNotOptimize(affine_equivariant_var(m, s));
}
BENCHMARK(BM_AffineEquivariantVar)->Arg(2)->Arg(4)->Arg(8);

static void BM_EmpiricalMoments(benchmark::State& state) {
  const MCConfig cfg{4096, 10, CESModel::spherical(2, DistributionFamily::gaussian()),
                     StatisticSpec{}, 11, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(empirical_moments(cfg));
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_EmpiricalMoments)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
