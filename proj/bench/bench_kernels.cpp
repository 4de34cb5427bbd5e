#include <benchmark/benchmark.h>

#include "diffseq/builders.hpp"
#include "support.hpp"

using namespace diffseq;
using kernels::Exec;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

std::vector<kernels::SparseRow> random_rows(int rows, int cols) {
  std::vector<kernels::SparseRow> out;
  for (int r = 0; r < rows; ++r) {
    std::vector<kernels::SparseEntry> e;
    for (int c = 0; c < cols; ++c)
      if (testsupport::uniform(0, 99) < 15) e.push_back({c, Rational(testsupport::uniform(-9, 9))});
    out.push_back(kernels::make_row(std::move(e)));
  }
  return out;
}

void BM_Echelon(benchmark::State& st) {
  const auto rows = random_rows(80, 64);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reduced_echelon(rows, 64, mode(st)));
}

void BM_Compose(benchmark::State& st) {
  const auto g = ConstantMetric::euclidean(4);
  const auto B = bianchi(4), R = riemann_linearized(4, g);
  for (auto _ : st) benchmark::DoNotOptimize(compose(B, R, mode(st)));
}

void BM_Apply(benchmark::State& st) {
  const auto R = riemann_linearized(5, ConstantMetric::euclidean(5));
  const auto s = testsupport::random_section(5, R.cols(), 5);
  for (auto _ : st) benchmark::DoNotOptimize(apply(R, s, mode(st)));
}

void BM_Syzygies(benchmark::State& st) {
  const auto p = killing(4, ConstantMetric::euclidean(4)).row_presentation();
  for (auto _ : st) benchmark::DoNotOptimize(syzygies(p, mode(st)));
}

void BM_CompatibilityConditions(benchmark::State& st) {
  const auto C = conformal_killing(4, ConstantMetric::euclidean(4));
  for (auto _ : st) benchmark::DoNotOptimize(compatibility_conditions(C, mode(st)));
}

}  // namespace

// argument 0 = serial reference, 1 = OpenMP
BENCHMARK(BM_Echelon)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Compose)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Syzygies)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompatibilityConditions)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
