#include <benchmark/benchmark.h>

#include "semidirac/fw_verify.hpp"
#include "semidirac/trajectory.hpp"

using namespace semidirac;

namespace {

void BM_RhsBerry(benchmark::State& state) {
  const PhysConstants k = PhysConstants{}.with_hbar(0.01);
  const FieldConfig cfg = FieldConfig::uniform(Vec3(0.01, 0.02, 0.0), Vec3(0.0, 0.03, 0.04));
  ParticleState s;
  s.p = Vec3(0.3, 0.1, -0.2);
  s.S = Vec3(0.0, 0.6, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, cfg, RhsModel::berry_full, k));
}
BENCHMARK(BM_RhsBerry);

void BM_RhsPauli(benchmark::State& state) {
  const PhysConstants k = PhysConstants{}.with_hbar(0.01);
  const FieldConfig cfg = FieldConfig::uniform(Vec3(0.01, 0.02, 0.0), Vec3(0.0, 0.03, 0.04));
  ParticleState s;
  s.p = Vec3(0.3, 0.1, -0.2);
  s.S = Vec3(0.0, 0.6, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, cfg, RhsModel::pauli_canonical, k));
}
BENCHMARK(BM_RhsPauli);

void BM_FwUnitary(benchmark::State& state) {
  const PhysConstants k = PhysConstants{}.with_hbar(0.1);
  const Vec3 p(0.6, -0.3, 0.8), H(0.05, -0.03, 0.04);
  for (auto _ : state) benchmark::DoNotOptimize(fw_unitary(p, H, k));
}
BENCHMARK(BM_FwUnitary);

void BM_CurvatureMatrix(benchmark::State& state) {
  const PhysConstants k;
  const Vec3 p(0.6, -0.3, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(berry_curvature_matrix(p, k));
}
BENCHMARK(BM_CurvatureMatrix);

void BM_Integrate(benchmark::State& state) {
  const PhysConstants k = PhysConstants{}.with_hbar(0.01);
  const FieldConfig cfg = FieldConfig::uniform(Vec3::Zero(), Vec3(0.0, 0.0, 0.05));
  ParticleState s;
  s.p = Vec3(0.3, 0.0, 0.0);
  s.S = Vec3(0.6, 0.0, 0.8);
  IntegratorSettings st;
  st.scheme = state.range(0) == 0 ? Scheme::rk4_fixed : Scheme::rk45_adaptive;
  st.T = 100.0;
  st.dt = 0.01;
  st.output_every = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, cfg, RhsModel::berry_full, k, st));
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
