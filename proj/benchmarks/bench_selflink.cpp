#include <benchmark/benchmark.h>

#include <memory>

#include "selflink/curve.hpp"
#include "selflink/diagram.hpp"
#include "selflink/framing.hpp"
#include "selflink/quadrature.hpp"

using namespace selflink;

namespace {

CurvePtr trefoil() { return std::make_shared<TorusKnotCurve>(2, 3, 2.0, 0.5); }

QuadratureConfig config(int n, bool parallel) {
  QuadratureConfig cfg;
  cfg.n = n;
  cfg.richardson = false;
  cfg.parallel = parallel;
  return cfg;
}

void BM_WritheSerial(benchmark::State& state) {
  auto k = trefoil();
  const auto cfg = config(static_cast<int>(state.range(0)), false);
  for (auto _ : state)
    benchmark::DoNotOptimize(writhe_integral(*k, cfg).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WritheSerial)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_WritheParallel(benchmark::State& state) {
  auto k = trefoil();
  const auto cfg = config(static_cast<int>(state.range(0)), true);
  for (auto _ : state)
    benchmark::DoNotOptimize(writhe_integral(*k, cfg).value);
}
BENCHMARK(BM_WritheParallel)->Arg(512)->Arg(1024)->Arg(2048);

void BM_LinkingHopf(benchmark::State& state) {
  auto c0 = std::make_shared<CircleCurve>(1.0);
  auto c1 = std::make_shared<CircleCurve>(1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
  const auto cfg = config(static_cast<int>(state.range(0)), false);
  for (auto _ : state)
    benchmark::DoNotOptimize(linking_integral(*c0, *c1, cfg).value);
}
BENCHMARK(BM_LinkingHopf)->Arg(256)->Arg(512);

void BM_TwistFrenet(benchmark::State& state) {
  auto k = trefoil();
  auto f = frenet_framing(k);
  for (auto _ : state)
    benchmark::DoNotOptimize(twist_integral(*f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TwistFrenet)->Arg(512)->Arg(2048);

void BM_DiagramProjection(benchmark::State& state) {
  auto k = trefoil();
  const Vec3 d{0.234, -0.117, 0.965};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        project_diagram({k}, d, static_cast<int>(state.range(0))).crossings.size());
}
BENCHMARK(BM_DiagramProjection)->Arg(512)->Arg(1024);

void BM_LiftClass(benchmark::State& state) {
  auto k = trefoil();
  auto f = frenet_framing(k);
  for (auto _ : state)
    benchmark::DoNotOptimize(so3_lift_class(*f));
}
BENCHMARK(BM_LiftClass);

void BM_CrossTangents(benchmark::State& state) {
  auto k = trefoil();
  for (auto _ : state)
    benchmark::DoNotOptimize(cross_tangent_count(*k, static_cast<int>(state.range(0))).count);
}
BENCHMARK(BM_CrossTangents)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
