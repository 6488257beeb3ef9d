// Serial reference vs OpenMP kernels, plus FFT vs direct operator apply.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>

#include "nvsoliton/kernels.hpp"
#include "nvsoliton/potentials.hpp"
#include "nvsoliton/scattering.hpp"

using namespace nvsoliton;

namespace {

constexpr double kEnergy = 1.0;
constexpr cplx kDiagonal{-0.04, -0.02};

struct Cloud {
  std::vector<int> i1, i2;
  std::vector<Vec2> points;
  std::vector<cplx> sources;
};

// Nodes of an n x n patch with spacing h, as on a square support.
Cloud cloud(int n, double h) {
  Cloud c;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      c.i1.push_back(a);
      c.i2.push_back(b);
      c.points.push_back({a * h, b * h});
      c.sources.push_back(std::polar(1.0, 0.1 * a - 0.3 * b));
    }
  return c;
}

std::vector<Vec2> directions(int m) {
  std::vector<Vec2> d(m);
  for (int i = 0; i < m; ++i) d[i] = {std::cos(2.0 * M_PI * i / m), std::sin(2.0 * M_PI * i / m)};
  return d;
}

template <auto Fn>
void BM_GreenTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const kernels::TableShape shape{n, n, 2 * n, 2 * n};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(kEnergy, 0.15, shape, kDiagonal));
  state.SetItemsProcessed(state.iterations() * 4 * n * n);
}

template <auto Fn>
void BM_Projection(benchmark::State& state) {
  const Cloud c = cloud(static_cast<int>(state.range(0)), 0.15);
  const auto dirs = directions(64);
  std::vector<cplx> out(dirs.size());
  for (auto _ : state) {
    Fn(dirs, c.points, c.sources, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * dirs.size() * c.points.size());
}

template <auto Fn>
void BM_DirectConvolution(benchmark::State& state) {
  const Cloud c = cloud(static_cast<int>(state.range(0)), 0.15);
  std::vector<cplx> out(c.sources.size());
  for (auto _ : state) {
    Fn(c.i1, c.i2, kEnergy, 0.15, kDiagonal, c.sources, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * c.sources.size() * c.sources.size());
}

void apply_bench(benchmark::State& state, bool fft) {
  const int n = static_cast<int>(state.range(0));
  const Potential v = sample_potential(PotentialSpec::gaussian(0.1, 1.0), Grid2D(20.0, n));
  const LippmannSchwinger solver(v, kEnergy);
  std::vector<cplx> x(solver.active_cells());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::polar(1.0, 0.01 * static_cast<double>(i));
  for (auto _ : state) benchmark::DoNotOptimize(fft ? solver.apply(x) : solver.apply_reference(x));
  state.counters["cells"] = static_cast<double>(x.size());
}

void BM_ApplyFft(benchmark::State& state) { apply_bench(state, true); }
void BM_ApplyDirect(benchmark::State& state) { apply_bench(state, false); }

}  // namespace

BENCHMARK(BM_GreenTable<kernels::serial::green_table>)->Name("green_table/serial")->Arg(64)->Arg(128);
BENCHMARK(BM_GreenTable<kernels::omp::green_table>)->Name("green_table/omp")->Arg(64)->Arg(128);
BENCHMARK(BM_Projection<kernels::serial::plane_wave_projection>)->Name("projection/serial")->Arg(32)->Arg(64);
BENCHMARK(BM_Projection<kernels::omp::plane_wave_projection>)->Name("projection/omp")->Arg(32)->Arg(64);
BENCHMARK(BM_DirectConvolution<kernels::serial::direct_convolution>)->Name("direct_convolution/serial")->Arg(16)->Arg(32);
BENCHMARK(BM_DirectConvolution<kernels::omp::direct_convolution>)->Name("direct_convolution/omp")->Arg(16)->Arg(32);
BENCHMARK(BM_ApplyFft)->Name("apply/fft")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyDirect)->Name("apply/direct")->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
