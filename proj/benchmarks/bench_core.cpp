#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "conewolff/averaging.hpp"
#include "conewolff/cone_chart.hpp"
#include "conewolff/cone_maps.hpp"
#include "conewolff/curve.hpp"
#include "conewolff/decoupling.hpp"
#include "conewolff/exponent_schedule.hpp"
#include "conewolff/fields.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/multipliers.hpp"
#include "conewolff/rng.hpp"
#include "conewolff/symbols.hpp"

using namespace conewolff;

namespace {

std::vector<Vec3> random_directions(int count, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<Vec3> out;
  while (static_cast<int>(out.size()) < count) {
    Vec3 v(rng.next(-1, 1), rng.next(-1, 1), rng.next(-1, 1));
    if (v.norm() > 0.1 && v.norm() < 1.0) out.push_back(v.normalized());
  }
  return out;
}

}  // namespace

static void BM_FrenetFrame(benchmark::State& state) {
  const Curve c = state.range(0) ? twisted_cubic() : helix(1.0, 1.0);
  double s = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frenet_frame(c, s));
    s = s > 0.9 ? -0.9 : s + 0.01;
  }
}
BENCHMARK(BM_FrenetFrame)->Arg(0)->Arg(1);

static void BM_ConeCoordinates(benchmark::State& state) {
  const Curve c = helix(1.0, 1.0);
  std::vector<Vec3> xs;
  for (double s = -0.8; s <= 0.8; s += 0.05) {
    const FrenetFrame f = frenet_frame(c, s);
    xs.push_back(f.B + 0.05 * f.N);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cone_coordinates(c, xs[i]));
    i = (i + 1) % xs.size();
  }
}
BENCHMARK(BM_ConeCoordinates);

static void BM_LightConeResidual(benchmark::State& state) {
  const Mat3 m = tilt_normalize(0.3, -0.2, 0.5);
  const auto dirs = random_directions(1024, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    const Vec3& d = dirs[i];
    benchmark::DoNotOptimize(light_cone_residual(m * Vec3(d.x(), d.y(), std::hypot(d.x(), d.y()))));
    i = (i + 1) & 1023;
  }
}
BENCHMARK(BM_LightConeResidual);

static void BM_ExponentSchedule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exponent_schedule("74", "0.1"));
}
BENCHMARK(BM_ExponentSchedule);

static void BM_MkMultiplier(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Curve c = helix(1.0, 1.0);
  const SymbolPiece ak = make_symbol(c, k);
  std::vector<Vec3> xs;
  for (double s = -0.5; s <= 0.5; s += 0.1) {
    const FrenetFrame f = frenet_frame(c, s);
    xs.push_back(std::ldexp(1.0, k) * (f.B + 0.02 * f.N));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mk_multiplier(ak, xs[i]));
    i = (i + 1) % xs.size();
  }
}
BENCHMARK(BM_MkMultiplier)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

static void BM_ApplyMultiplier(benchmark::State& state) {
  const Grid3 g(static_cast<int>(state.range(0)), 2.0);
  const Field3 f = band_limited_random_field(g, 3, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_multiplier(f, [](const Vec3& xi) { return cplx(1.0 / (1.0 + xi.squaredNorm())); }));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_ApplyMultiplier)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_AveragingSymbol(benchmark::State& state) {
  const Grid3 g(static_cast<int>(state.range(0)), 1.5);
  const Curve c = helix(1.0, 1.0);
  const ParamCutoff chi{0.0, 0.25};
  for (auto _ : state) benchmark::DoNotOptimize(averaging_symbol(g, c, chi, 1.0));
}
BENCHMARK(BM_AveragingSymbol)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_DecouplingFamily(benchmark::State& state) {
  const Grid3 g(64, 8.0);
  const PlateFamily fam = light_cone_family(0.25, 14.0);
  const std::vector<std::vector<cplx>> coeffs{std::vector<cplx>(fam.plates.size(), cplx(1.0))};
  for (auto _ : state) benchmark::DoNotOptimize(decoupling_family(g, fam.plates, 4.0, coeffs));
}
BENCHMARK(BM_DecouplingFamily)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
