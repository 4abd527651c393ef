#include <benchmark/benchmark.h>

#include "rankcal/assessment.hpp"
#include "rankcal/comparestats.hpp"
#include "rankcal/correctness.hpp"
#include "rankcal/measures.hpp"
#include "rankcal/random.hpp"
#include "rankcal/synth.hpp"

namespace {

using namespace rankcal;

MeasureSeries Series(std::size_t n) {
  return synth::GenerateCase1(0.2, n, 1, synth::CorrectnessMode::kBernoulli).series;
}

void BM_EmpiricalRce(benchmark::State& state) {
  const auto s = Series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assessment::EmpiricalRce(s, 20).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalRce)->Arg(2000)->Arg(200000);

void BM_Ece(benchmark::State& state) {
  const auto s = Series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assessment::Ece(s, 20).value);
}
BENCHMARK(BM_Ece)->Arg(200000);

void BM_Auroc(benchmark::State& state) {
  const auto s = Series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assessment::Auroc(s, 0.5).value);
}
BENCHMARK(BM_Auroc)->Arg(200000);

void BM_Auarc(benchmark::State& state) {
  const auto s = Series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assessment::Auarc(s, 0.5).value);
}
BENCHMARK(BM_Auarc)->Arg(200000);

void BM_BootstrapRce(benchmark::State& state) {
  const auto s = Series(20000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        stats::Bootstrap(s, [](const MeasureSeries& x) { return assessment::EmpiricalRce(x, 20).value; }, "rce", 20, 3)
            .mean);
  }
}
BENCHMARK(BM_BootstrapRce)->Unit(benchmark::kMillisecond);

void BM_Spectral(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  records::Matrix w(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    w[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) w[i][j] = w[j][i] = rng.Uniform();
  }
  for (auto _ : state) {
    const auto s = measures::SpectralDecompose(w);
    benchmark::DoNotOptimize(measures::Eccentricity(s).value);
  }
}
BENCHMARK(BM_Spectral)->Arg(5)->Arg(20)->Arg(50);

void BM_RougeL(benchmark::State& state) {
  const auto words = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const char* vocab[] = {"the", "penny", "black", "red", "stamp", "first", "british", "post", "queen", "victoria"};
  std::string a, b;
  for (std::size_t i = 0; i < words; ++i) {
    a += std::string(vocab[rng.Index(10)]) + " ";
    b += std::string(vocab[rng.Index(10)]) + " ";
  }
  const auto spec = correctness::CorrectnessSpec::Parse("rougeL");
  for (auto _ : state) benchmark::DoNotOptimize(correctness::ScorePair(a, b, spec));
}
BENCHMARK(BM_RougeL)->Arg(8)->Arg(64);

void BM_Case2Generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(synth::GenerateCase2(0.3, 0.2, 5, 200000, 4).series.size());
}
BENCHMARK(BM_Case2Generate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
