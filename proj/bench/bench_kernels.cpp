// Serial reference vs OpenMP kernels. FLOWCAT_THREADS caps the thread count.

#include "flowcat/kernels.hpp"
#include "flowcat/morse.hpp"
#include "flowcat/strat_arcs.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace flowcat;

namespace {

IntMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-3, 3);
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

// boundary of the 6-simplex: a 5-sphere with 126 cells
SimplicialComplex sphere() {
  std::vector<std::vector<std::string>> facets;
  for (int skip = 0; skip < 7; ++skip) {
    std::vector<std::string> f;
    for (int v = 0; v < 7; ++v)
      if (v != skip) f.push_back("v" + std::to_string(v));
    facets.push_back(f);
  }
  return complex_from_simplices(facets);
}

CornerCategory arc_corner() {
  ArcCategory C;
  C.sequence = Sequence{{{"a0", "a1", "a2"}, {"b0", "b1", "b2"}, {"c0", "c1", "c2"}, {"d0", "d1", "d2"}}};
  C.source = {0, 0};
  C.target = {3, 0};
  return build_arc_category(C, 4).category;
}

void BM_multiply_serial(benchmark::State& st) {
  const auto a = random_matrix(static_cast<int>(st.range(0)), 1), b = random_matrix(static_cast<int>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
void BM_multiply_parallel(benchmark::State& st) {
  const auto a = random_matrix(static_cast<int>(st.range(0)), 1), b = random_matrix(static_cast<int>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(multiply_parallel(a, b));
}

void BM_morse_serial(benchmark::State& st) {
  const auto K = sphere();
  const auto V = random_matching(K, 5);
  for (auto _ : st) benchmark::DoNotOptimize(morse_differential_flow(K, V));
}
void BM_morse_parallel(benchmark::State& st) {
  const auto K = sphere();
  const auto V = random_matching(K, 5);
  for (auto _ : st) benchmark::DoNotOptimize(morse_differential_parallel(K, V));
}

void BM_corner_serial(benchmark::State& st) {
  const auto C = arc_corner();
  for (auto _ : st) benchmark::DoNotOptimize(is_corner_model(C));
}
void BM_corner_parallel(benchmark::State& st) {
  const auto C = arc_corner();
  for (auto _ : st) benchmark::DoNotOptimize(is_corner_model_parallel(C));
}

void BM_conic_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(conic_sample_serial(4, st.range(0), 7));
}
void BM_conic_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(conic_sample_parallel(4, st.range(0), 7));
}

}  // namespace

BENCHMARK(BM_multiply_serial)->Arg(32)->Arg(64);
BENCHMARK(BM_multiply_parallel)->Arg(32)->Arg(64);
BENCHMARK(BM_morse_serial);
BENCHMARK(BM_morse_parallel);
BENCHMARK(BM_corner_serial);
BENCHMARK(BM_corner_parallel);
BENCHMARK(BM_conic_serial)->Arg(1000);
BENCHMARK(BM_conic_parallel)->Arg(1000);

BENCHMARK_MAIN();
