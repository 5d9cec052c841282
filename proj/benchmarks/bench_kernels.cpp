#include <benchmark/benchmark.h>

#include "cbcount/bundle.hpp"
#include "cbcount/census.hpp"
#include "cbcount/conics.hpp"
#include "cbcount/fibre_count.hpp"
#include "cbcount/localdata.hpp"
#include "cbcount/projgeo.hpp"

using namespace cbcount;

namespace {

const ConicBundleSurface& surface() {
  static const ConicBundleSurface s = sum_of_two_squares_surface();
  return s;
}

const HeightModel& model() {
  static const HeightModel m = HeightModel::for_surface(surface(), Rat(1));
  return m;
}

void BM_FibreCount(benchmark::State& state, Strategy strategy) {
  const Rat B(state.range(0));
  const ProjPoint y = ProjPoint::from_integers({1, 5});
  for (auto _ : state) benchmark::DoNotOptimize(count_fibre(surface(), model(), y, B, strategy));
}
BENCHMARK_CAPTURE(BM_FibreCount, box, Strategy::box)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FibreCount, parametrized, Strategy::parametrized)
    ->Arg(1000)->Arg(10000)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_SigmaP(benchmark::State& state) {
  const TernaryForm f = TernaryForm::diagonal(Int(1), Int(1), Int(-65 * state.range(0)));
  const Int p(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sigma_p_detail(f, p));
}
BENCHMARK(BM_SigmaP)->Arg(2)->Arg(3)->Arg(7)->Arg(199)->Arg(211)->Unit(benchmark::kMicrosecond);

void BM_SigmaInf(benchmark::State& state) {
  const ProjPoint y = ProjPoint::from_integers({3, 7});
  for (auto _ : state) benchmark::DoNotOptimize(sigma_inf(surface(), model(), y, 1e-10));
}
BENCHMARK(BM_SigmaInf)->Unit(benchmark::kMicrosecond);

void BM_FindPoint(benchmark::State& state) {
  const TernaryForm f = TernaryForm::diagonal(Int(1), Int(1), Int(-5 * 13 * 17 * 29 * state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_point(f));
}
BENCHMARK(BM_FindPoint)->Arg(1)->Arg(37)->Arg(37 * 41)->Unit(benchmark::kMicrosecond);

void BM_EnumerateBase(benchmark::State& state) {
  for (auto _ : state) {
    std::uint64_t n = 0;
    for_each_base_point(1, static_cast<std::uint64_t>(state.range(0)), [&](const ProjPoint&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EnumerateBase)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CountTotal(benchmark::State& state) {
  const std::vector<Rat> grid{Rat(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(count_total(surface(), model(), grid));
}
BENCHMARK(BM_CountTotal)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
