#include <benchmark/benchmark.h>

#include <cstdint>

#include "qmi/distributions.hpp"
#include "qmi/mi_engine.hpp"
#include "qmi/numerics.hpp"

namespace {

void BM_QpeaReduced(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qmi::mi_qpea_reduced(n).bits);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QpeaReduced)->Arg(7)->Arg(63)->Arg(511)->Arg(4095)->Arg(32767)->Complexity()->Unit(benchmark::kMillisecond);

void BM_QpeaNaive(benchmark::State& state) {
  const auto channel = qmi::qpea_channel(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qmi::mi_discrete_naive(channel).bits);
}
BENCHMARK(BM_QpeaNaive)->Arg(7)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);

void BM_SepOptimalQuad(benchmark::State& state) {
  const auto density = qmi::sep_optimal_covariant(static_cast<std::uint64_t>(state.range(0)), qmi::DensityMode::Exact);
  for (auto _ : state) benchmark::DoNotOptimize(qmi::mi_covariant(density).bits);
}
BENCHMARK(BM_SepOptimalQuad)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SepOptimalDensityEval(benchmark::State& state) {
  const qmi::SeparableOptimalDensity f(static_cast<std::uint64_t>(state.range(0)), qmi::DensityMode::Exact);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(theta));
    theta += 1e-4;
    if (theta > 1.0) theta -= 1.0;
  }
}
BENCHMARK(BM_SepOptimalDensityEval)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SepOptimalMc(benchmark::State& state) {
  const auto density = qmi::sep_optimal_covariant(1000, qmi::DensityMode::Exact);
  qmi::McSpec mc;
  mc.samples = static_cast<std::uint64_t>(state.range(0));
  mc.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(qmi::mi_covariant_mc(density, mc).bits);
}
BENCHMARK(BM_SepOptimalMc)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_HammingClosed(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qmi::mi_hamming_closed(n).bits);
}
BENCHMARK(BM_HammingClosed)->RangeMultiplier(10)->Range(10, 100'000)->Unit(benchmark::kMicrosecond);

void BM_LogBinomial(benchmark::State& state) {
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qmi::log_binomial(100'000, k));
    k = (k + 7919) % 100'001;
  }
}
BENCHMARK(BM_LogBinomial);

}  // namespace

BENCHMARK_MAIN();
