// Serial reference kernels against the OpenMP ones on synthetic inputs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sentivote/kernels.hpp"

namespace {

using namespace sentivote;
using namespace sentivote::kernels;

constexpr std::size_t kClasses = 3;

struct VoteInput {
  std::vector<std::vector<double>> probs;
  std::vector<RunView> views;
  std::size_t n;

  VoteInput(std::size_t models, std::size_t samples) : n(samples) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t m = 0; m < models; ++m) {
      auto& p = probs.emplace_back(samples * kClasses);
      for (std::size_t i = 0; i < samples; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < kClasses; ++k) sum += (p[i * kClasses + k] = u(rng));
        for (std::size_t k = 0; k < kClasses; ++k) p[i * kClasses + k] /= sum;
      }
    }
    for (std::size_t m = 0; m < models; ++m) views.push_back({probs[m], 0.5 + 0.05 * m});
  }
};

template <auto Vote>
void BM_Vote(benchmark::State& state) {
  const VoteInput in(9, static_cast<std::size_t>(state.range(0)));
  std::vector<double> scores(in.n * kClasses), mass(in.n * kClasses);
  std::vector<LabelId> labels(in.n);
  const auto rule = state.range(1) == 0 ? VoteRule::Hard : VoteRule::Soft;
  for (auto _ : state) {
    Vote(in.views, in.n, kClasses, rule, VoteBuffers{scores, mass, labels});
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Count>
void BM_Confusion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(11);
  std::vector<LabelId> gold(n), pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    gold[i] = LabelId(static_cast<std::uint32_t>(rng() % kClasses));
    pred[i] = LabelId(static_cast<std::uint32_t>(rng() % kClasses));
  }
  for (auto _ : state) benchmark::DoNotOptimize(Count(gold, pred, kClasses));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void vote_args(benchmark::internal::Benchmark* b) {
  for (long n : {3427L, 35266L, 1L << 20}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
}

}  // namespace

BENCHMARK(BM_Vote<serial::vote>)->Name("vote/serial")->Apply(vote_args);
BENCHMARK(BM_Vote<omp::vote>)->Name("vote/omp")->Apply(vote_args)->UseRealTime();
BENCHMARK(BM_Confusion<serial::confusion_counts>)->Name("confusion/serial")->Range(1 << 12, 1 << 22);
BENCHMARK(BM_Confusion<omp::confusion_counts>)
    ->Name("confusion/omp")
    ->Range(1 << 12, 1 << 22)
    ->UseRealTime();

BENCHMARK_MAIN();
