// Serial reference kernels against their OpenMP counterparts. Each pair is
// registered under the same size so the rows line up in the report.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "lqg/kernels.hpp"

namespace {

namespace ks = lqg::kernels::serial;
namespace ko = lqg::kernels::omp;

std::vector<double> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

std::vector<double> sine_basis(int n) {
  std::vector<double> u(static_cast<std::size_t>(n) * n);
  const double norm = std::sqrt(2.0 / (n + 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u[i * n + j] = norm * std::sin(M_PI * (i + 1) * (j + 1) / (n + 1.0));
  return u;
}

template <auto Kernel>
void sine_synthesis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto u = sine_basis(n);
  const auto c = noise(u.size(), 1);
  std::vector<double> out(u.size());
  for (auto _ : state) {
    Kernel(n, u, c, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}

template <auto Kernel>
void exp_scale(benchmark::State& state) {
  const auto h = noise(static_cast<std::size_t>(state.range(0)), 2);
  std::vector<double> out(h.size());
  for (auto _ : state) {
    Kernel(h, 0.5, 1e-5, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(h.size()));
}

template <auto Kernel>
void stencil_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = noise(static_cast<std::size_t>(n) * n, 3);
  std::vector<double> y(x.size());
  for (auto _ : state) {
    Kernel(n, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}

template <auto Kernel>
void chunked_sum(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}

template <auto Kernel>
void map_index(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  std::vector<double> out(count);
  const std::function<double(std::size_t)> fn = [](std::size_t i) { return std::sin(1e-3 * static_cast<double>(i)); };
  for (auto _ : state) {
    Kernel(count, fn, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count));
}

BENCHMARK(sine_synthesis<ks::sine_synthesis>)->Name("sine_synthesis/serial")->Arg(127)->Arg(255);
BENCHMARK(sine_synthesis<ko::sine_synthesis>)->Name("sine_synthesis/omp")->Arg(127)->Arg(255);
BENCHMARK(exp_scale<ks::exp_scale>)->Name("exp_scale/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(exp_scale<ko::exp_scale>)->Name("exp_scale/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(stencil_apply<ks::stencil_apply>)->Name("stencil_apply/serial")->Arg(255)->Arg(1023);
BENCHMARK(stencil_apply<ko::stencil_apply>)->Name("stencil_apply/omp")->Arg(255)->Arg(1023);
BENCHMARK(chunked_sum<ks::chunked_sum>)->Name("chunked_sum/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(chunked_sum<ko::chunked_sum>)->Name("chunked_sum/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(map_index<ks::map_index>)->Name("map_index/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(map_index<ko::map_index>)->Name("map_index/omp")->Arg(1 << 16)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
