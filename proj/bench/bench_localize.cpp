#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "tfvtg/kernels.hpp"
#include "tfvtg/localizer.hpp"

namespace {

tfvtg::SimilarityTrack make_track(std::size_t frames) {
  std::mt19937_64 rng(frames);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::vector<double> v(frames);
  for (std::size_t n = 0; n < frames; ++n) {
    // Slow bumps plus noise.
    const double x = static_cast<double>(n) / static_cast<double>(frames);
    v[n] = 0.2 + 0.15 * std::sin(12.0 * x) + noise(rng);
  }
  return tfvtg::SimilarityTrack("bench", std::move(v), 3.0);
}

void BM_ScoreAllSerial(benchmark::State& state) {
  const auto track = make_track(static_cast<std::size_t>(state.range(0)));
  const tfvtg::ProposalScorer scorer(track, tfvtg::ScoringParams{});
  for (auto _ : state) benchmark::DoNotOptimize(tfvtg::kernels::score_all_serial(scorer));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
}

void BM_ScoreAllParallel(benchmark::State& state) {
  const auto track = make_track(static_cast<std::size_t>(state.range(0)));
  const tfvtg::ProposalScorer scorer(track, tfvtg::ScoringParams{});
  for (auto _ : state) benchmark::DoNotOptimize(tfvtg::kernels::score_all_parallel(scorer));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
}

void BM_LocalizeTopk(benchmark::State& state) {
  const auto track = make_track(static_cast<std::size_t>(state.range(0)));
  const tfvtg::ScoringParams params;
  for (auto _ : state) benchmark::DoNotOptimize(tfvtg::localize_topk(track, params));
}

}  // namespace

BENCHMARK(BM_ScoreAllSerial)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_ScoreAllParallel)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_LocalizeTopk)->Arg(96)->Arg(450)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
