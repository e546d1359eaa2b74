// Serial reference vs OpenMP kernels on the sizes the solvers use.
// Set OMP_NUM_THREADS to vary the team size.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "csr/kernels.hpp"
#include "csr/rng.hpp"
#include "csr/sensing.hpp"

namespace {

using csr::Complex;
using csr::ComplexVector;

ComplexVector random_vector(std::size_t n, std::uint64_t seed) {
  csr::CounterRng rng(seed);
  ComplexVector v(n);
  for (auto& z : v) z = Complex(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
  return v;
}

template <bool Parallel>
void BM_AdjointMultiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const csr::Dictionary d = csr::build_dictionary(n, csr::draw_mask(n, m, 11), true);
  const ComplexVector r = random_vector(m, 12);
  ComplexVector out(n);
  for (auto _ : state) {
    if constexpr (Parallel) csr::kernels::adjoint_multiply_parallel(d.atoms, r, out);
    else csr::kernels::adjoint_multiply_serial(d.atoms, r, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * m));
}

template <bool Parallel>
void BM_ConcentrationDifferences(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const ComplexVector x = random_vector(n, 21);
  ComplexVector twiddle(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    twiddle[t] = Complex(std::cos(a), std::sin(a)) / std::sqrt(static_cast<double>(n));
  }
  const auto missing = csr::draw_mask(n, m, 22).missing();
  ComplexVector out(missing.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      csr::kernels::concentration_differences_parallel(x, twiddle, missing, 0.1, out);
    } else {
      csr::kernels::concentration_differences_serial(x, twiddle, missing, 0.1, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * missing.size()));
}

template <bool Parallel>
void BM_WeightedGram(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto cols = static_cast<std::size_t>(state.range(1));
  csr::RealMatrix g(rows, cols);
  csr::CounterRng rng(31);
  for (auto& v : g.data) v = rng.uniform01() - 0.5;
  std::vector<double> d(cols);
  for (auto& v : d) v = rng.uniform01() + 0.1;
  csr::RealMatrix out(rows, rows);
  for (auto _ : state) {
    if constexpr (Parallel) csr::kernels::weighted_gram_parallel(g, d, out);
    else csr::kernels::weighted_gram_serial(g, d, out);
    benchmark::DoNotOptimize(out.data.data());
  }
}

}  // namespace

BENCHMARK(BM_AdjointMultiply<false>)->Args({512, 60})->Args({512, 100})->Args({2048, 200});
BENCHMARK(BM_AdjointMultiply<true>)->Args({512, 60})->Args({512, 100})->Args({2048, 200});
BENCHMARK(BM_ConcentrationDifferences<false>)->Args({512, 60})->Args({512, 20})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConcentrationDifferences<true>)->Args({512, 60})->Args({512, 20})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightedGram<false>)->Args({120, 1024})->Args({200, 1024})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightedGram<true>)->Args({120, 1024})->Args({200, 1024})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
