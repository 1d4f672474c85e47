// Brute force vs divide-and-conquer, and serial vs parallel kernels.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "qie/solver.hpp"

using namespace qie;

namespace {

const FiniteQuandle& symplectic(int p) {
  static const FiniteQuandle q2 = build_quandle("symplectic:p=2,n=1");
  static const FiniteQuandle q3 = build_quandle("symplectic:p=3,n=1");
  static const FiniteQuandle q5 = build_quandle("symplectic:p=5,n=1");
  return p == 2 ? q2 : p == 3 ? q3 : q5;
}

const LinkDiagram& link(int which) {
  static const LinkDiagram h = generate("hopfsum");
  static const LinkDiagram l1 = generate("aslink:1");
  static const LinkDiagram f8 = generate("figure8");
  return which == 0 ? h : which == 1 ? l1 : f8;
}

// args: link (0 H, 1 L1, 2 figure8), p
void BM_Brute(benchmark::State& st) {
  const auto& d = link(static_cast<int>(st.range(0)));
  const auto& q = symplectic(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_solve(d, q).size());
}
BENCHMARK(BM_Brute)->Args({0, 3})->Args({0, 5})->Args({2, 3})->Unit(benchmark::kMillisecond);

// args: link, p, threads (0 = all)
void BM_Solve(benchmark::State& st) {
  const auto& d = link(static_cast<int>(st.range(0)));
  const auto& q = symplectic(static_cast<int>(st.range(1)));
  const int threads = static_cast<int>(st.range(2));
  for (auto _ : st) benchmark::DoNotOptimize(solve(d, q, {3, kDefaultRowCap, threads}).size());
  st.counters["threads"] = threads == 0 ? omp_get_max_threads() : threads;
}
BENCHMARK(BM_Solve)
    ->Args({0, 3, 1})->Args({0, 5, 1})->Args({0, 5, 0})->Args({2, 3, 1})
    ->Args({1, 3, 1})->Args({1, 3, 0})->Args({1, 5, 1})->Args({1, 5, 0})
    ->Unit(benchmark::kMillisecond);

// Chunk enumeration kernel on the first L1 chunk, serial vs parallel.
void BM_EnumerateChunk(benchmark::State& st) {
  const auto& d = link(1);
  const auto plan = partition_chunks(d, static_cast<int>(st.range(0)));
  const int threads = static_cast<int>(st.range(1));
  for (auto _ : st)
    for (const auto& c : plan.chunks) benchmark::DoNotOptimize(enumerate_chunk(d, c, symplectic(5), threads).cells.data());
}
BENCHMARK(BM_EnumerateChunk)->Args({3, 1})->Args({3, 0})->Args({5, 1})->Args({5, 0})->Unit(benchmark::kMillisecond);

// Equi-join kernel: two 3-crossing chunks of L1 sharing arcs.
void BM_Join(benchmark::State& st) {
  const auto& d = link(1);
  const auto plan = partition_chunks(d, 3);
  const auto a = enumerate_chunk(d, plan.chunks[0], symplectic(5));
  const auto b = enumerate_chunk(d, plan.chunks[1], symplectic(5));
  std::vector<std::string> warnings;
  const JoinOptions opts{kDefaultRowCap, static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(join_partial(a, b, opts, warnings).cells.data());
}
BENCHMARK(BM_Join)->Arg(1)->Arg(0)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
