// Serial reference kernels against the OpenMP kernels on the same fields.
// Thread count follows OMP_NUM_THREADS / CDA_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "cda/operators.hpp"
#include "cda/parallel.hpp"
#include "cda/reference.hpp"

using namespace cda;

namespace {

Grid grid_for(const benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return Grid{n, n, static_cast<int>(state.range(1)), 1.0, 1.0, HorizontalBC::Walls};
}

ScalarField scalar(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (auto& x : f.v) x = d(rng);
  return f;
}

VectorField2D velocity(const Grid& g) {
  return VectorField2D::sample(g.horizontal(), [](double x, double y) {
    return std::array<double, 2>{std::sin(3 * x) * std::cos(2 * y), -std::cos(3 * x) * std::sin(2 * y)};
  });
}

const ScalarBC& bc() {
  static const ScalarBC b = ScalarBC::neumann();
  return b;
}

void args(benchmark::internal::Benchmark* b) {
  b->Args({64, 16})->Args({128, 16})->Unit(benchmark::kMicrosecond);
}

// Items are cells of the field the kernel works on.
template <class F>
void run(benchmark::State& state, std::size_t cells, F&& f) {
  for (auto _ : state) benchmark::DoNotOptimize(f());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cells));
}

void BM_Laplacian_Reference(benchmark::State& s) {
  const auto f = scalar(grid_for(s), 1);
  run(s, f.v.size(), [&] { return reference::laplacian(f, bc()); });
}
void BM_Laplacian_OpenMP(benchmark::State& s) {
  const auto f = scalar(grid_for(s), 1);
  run(s, f.v.size(), [&] { return laplacian(f, bc()); });
}

void BM_Grad_Reference(benchmark::State& s) {
  const auto f = scalar(grid_for(s).horizontal(), 2);
  run(s, f.v.size(), [&] { return reference::grad_h(f); });
}
void BM_Grad_OpenMP(benchmark::State& s) {
  const auto f = scalar(grid_for(s).horizontal(), 2);
  run(s, f.v.size(), [&] { return grad_h(f); });
}

void BM_Div_Reference(benchmark::State& s) {
  const auto u = velocity(grid_for(s));
  run(s, u.size(), [&] { return reference::div_h(u); });
}
void BM_Div_OpenMP(benchmark::State& s) {
  const auto u = velocity(grid_for(s));
  run(s, u.size(), [&] { return div_h(u); });
}

void BM_WideLaplacian_Reference(benchmark::State& s) {
  const auto f = scalar(grid_for(s).horizontal(), 3);
  run(s, f.v.size(), [&] { return reference::wide_laplacian(f); });
}
void BM_WideLaplacian_OpenMP(benchmark::State& s) {
  const Grid g = grid_for(s).horizontal();
  const auto f = scalar(g, 3);
  std::vector<double> out(g.size()), sx, sy;
  run(s, f.v.size(), [&] {
    ops::apply_wide_laplacian(g, f.v, out, sx, sy);
    return out.data();
  });
}

void BM_MomentumAdvection_Reference(benchmark::State& s) {
  const auto u = velocity(grid_for(s));
  run(s, u.size(), [&] { return reference::momentum_advection(u); });
}
void BM_MomentumAdvection_OpenMP(benchmark::State& s) {
  const auto u = velocity(grid_for(s));
  run(s, u.size(), [&] { return ops::momentum_advection(u); });
}

void BM_ScalarAdvection_Reference(benchmark::State& s) {
  const Grid g = grid_for(s);
  const auto u = velocity(g);
  const auto t = scalar(g, 4);
  run(s, t.v.size(), [&] { return reference::scalar_advection(u, t, bc()); });
}
void BM_ScalarAdvection_OpenMP(benchmark::State& s) {
  const Grid g = grid_for(s);
  const auto u = velocity(g);
  const auto t = scalar(g, 4);
  run(s, t.v.size(), [&] { return ops::scalar_advection(u, t, bc()); });
}

void BM_Sum_Reference(benchmark::State& s) {
  const auto f = scalar(grid_for(s), 5);
  run(s, f.v.size(), [&] { return reference::sum(f.v); });
}
void BM_Sum_OpenMP(benchmark::State& s) {
  const auto f = scalar(grid_for(s), 5);
  run(s, f.v.size(), [&] { return par::blocked_sum(f.v.size(), [&](std::size_t i) { return f.v[i]; }); });
}

}  // namespace

BENCHMARK(BM_Laplacian_Reference)->Apply(args);
BENCHMARK(BM_Laplacian_OpenMP)->Apply(args);
BENCHMARK(BM_Grad_Reference)->Apply(args);
BENCHMARK(BM_Grad_OpenMP)->Apply(args);
BENCHMARK(BM_Div_Reference)->Apply(args);
BENCHMARK(BM_Div_OpenMP)->Apply(args);
BENCHMARK(BM_WideLaplacian_Reference)->Apply(args);
BENCHMARK(BM_WideLaplacian_OpenMP)->Apply(args);
BENCHMARK(BM_MomentumAdvection_Reference)->Apply(args);
BENCHMARK(BM_MomentumAdvection_OpenMP)->Apply(args);
BENCHMARK(BM_ScalarAdvection_Reference)->Apply(args);
BENCHMARK(BM_ScalarAdvection_OpenMP)->Apply(args);
BENCHMARK(BM_Sum_Reference)->Apply(args);
BENCHMARK(BM_Sum_OpenMP)->Apply(args);

int main(int argc, char** argv) {
  par::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
