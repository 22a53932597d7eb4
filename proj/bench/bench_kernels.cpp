// Serial reference kernels against their OpenMP counterparts.
//
// Arguments are the matrix order; run with OMP_NUM_THREADS set to compare
// thread counts. Each parallel benchmark reports the thread count it used.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "softfem/assembly.hpp"
#include "softfem/eigensolve.hpp"
#include "softfem/kernels.hpp"

using namespace softfem;
using kernels::DenseMatrix;

namespace {

// Linear FEM pencil on N elements: B banded, A dense copy of the stiffness.
struct Pencil {
  kernels::BandedLower l;
  DenseMatrix a;
};

Pencil make_pencil(std::size_t n) {
  const auto sys = build_system(Mesh1D::uniform(0.0, 1.0, static_cast<int>(n) + 1), MethodConfig::gsfem(1, 1.0 / 12, 1.0 / 360));
  Pencil p;
  kernels::cholesky_banded(sys.b, p.l);
  p.a = DenseMatrix(n, sys.a.to_dense());
  return p;
}

DenseMatrix random_symmetric(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

void set_threads(benchmark::State& state) { state.counters["threads"] = omp_get_max_threads(); }

template <void (*Reduce)(const kernels::BandedLower&, DenseMatrix&)>
void bm_reduce(benchmark::State& state) {
  const auto p = make_pencil(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    DenseMatrix a = p.a;
    Reduce(p.l, a);
    benchmark::DoNotOptimize(a.a.data());
  }
  set_threads(state);
}

template <kernels::Tridiagonal (*Tri)(DenseMatrix&, std::vector<double>&)>
void bm_tridiagonalize(benchmark::State& state) {
  const auto m = random_symmetric(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    DenseMatrix a = m;
    std::vector<double> betas;
    auto t = Tri(a, betas);
    benchmark::DoNotOptimize(t.diag.data());
  }
  set_threads(state);
}

template <DenseMatrix (*Acc)(const DenseMatrix&, const std::vector<double>&)>
void bm_accumulate(benchmark::State& state) {
  DenseMatrix a = random_symmetric(static_cast<std::size_t>(state.range(0)));
  std::vector<double> betas;
  kernels::serial::tridiagonalize(a, betas);
  for (auto _ : state) {
    auto q = Acc(a, betas);
    benchmark::DoNotOptimize(q.a.data());
  }
  set_threads(state);
}

void bm_solve(benchmark::State& state, kernels::Execution exec) {
  const auto sys = build_system(Mesh1D::uniform(0.0, 1.0, static_cast<int>(state.range(0))), MethodConfig::fem(2));
  for (auto _ : state) {
    auto s = solve_gevp(sys, {.want_vectors = true, .exec = exec});
    benchmark::DoNotOptimize(s.eigenvalues.data());
  }
  set_threads(state);
}

void bm_assemble_2d(benchmark::State& state, kernels::Execution exec) {
  const auto mesh = TensorMesh2D::uniform(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const auto kappa = DiffusionField::exp_x_minus_x2();
  for (auto _ : state) {
    auto k = assemble_stiffness_2d(mesh, 2, kappa, 0, exec);
    benchmark::DoNotOptimize(k.band_row(0));
  }
  set_threads(state);
}

} // namespace

BENCHMARK(bm_reduce<kernels::serial::reduce_to_standard>)->Name("reduce_to_standard/serial")->Arg(200)->Arg(400);
BENCHMARK(bm_reduce<kernels::omp::reduce_to_standard>)->Name("reduce_to_standard/omp")->Arg(200)->Arg(400);
BENCHMARK(bm_tridiagonalize<kernels::serial::tridiagonalize>)->Name("tridiagonalize/serial")->Arg(200)->Arg(400);
BENCHMARK(bm_tridiagonalize<kernels::omp::tridiagonalize>)->Name("tridiagonalize/omp")->Arg(200)->Arg(400);
BENCHMARK(bm_accumulate<kernels::serial::accumulate_qt>)->Name("accumulate_qt/serial")->Arg(200)->Arg(400);
BENCHMARK(bm_accumulate<kernels::omp::accumulate_qt>)->Name("accumulate_qt/omp")->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(bm_solve, serial, kernels::Execution::serial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_solve, omp, kernels::Execution::parallel)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_assemble_2d, serial, kernels::Execution::serial)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(bm_assemble_2d, omp, kernels::Execution::parallel)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
