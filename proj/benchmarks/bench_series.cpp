#include <benchmark/benchmark.h>

#include "fgdyn/fixtures.hpp"
#include "fgdyn/lubin_tate.hpp"
#include "fgdyn/torsion.hpp"

namespace {

using namespace fgdyn;

void BM_ComposeMultiplicative(benchmark::State& state) {
  const auto ctx = PrecisionContext::make(3, 20, static_cast<int>(state.range(0)));
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const TupleSeries p_series = fg_multiplication_map(m, 3L).series;
  for (auto _ : state) benchmark::DoNotOptimize(compose(p_series, p_series));
}
BENCHMARK(BM_ComposeMultiplicative)->Arg(8)->Arg(16)->Arg(32);

void BM_InverseTwoVariable(benchmark::State& state) {
  const auto ctx = PrecisionContext::make(2, 24, static_cast<int>(state.range(0)));
  const MultiSeries x = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries y = MultiSeries::variable(ctx, 2, 1);
  const TupleSeries h(std::vector<MultiSeries>{x + x * y + y * y * y, y + x * x});
  for (auto _ : state) benchmark::DoNotOptimize(compositional_inverse(h));
}
BENCHMARK(BM_InverseTwoVariable)->Arg(6)->Arg(10)->Arg(14);

void BM_LubinTate(benchmark::State& state) {
  LubinTate2Params params;
  params.p = static_cast<std::uint32_t>(state.range(0));
  params.h1 = 1;
  params.h2 = static_cast<int>(state.range(1));
  params.degree = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(lt2_build(params));
}
BENCHMARK(BM_LubinTate)->Args({2, 1, 4})->Args({2, 2, 8})->Args({3, 1, 9})->Unit(benchmark::kMillisecond);

void BM_TorsionMultiplicative(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const auto ctx = PrecisionContext::make(p, 20, static_cast<int>(p * p + 1));
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const auto ext = Extension::cyclotomic(ctx, 2);
  for (auto _ : state) benchmark::DoNotOptimize(torsion_probe_dim1(m, 2, ext));
}
BENCHMARK(BM_TorsionMultiplicative)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
