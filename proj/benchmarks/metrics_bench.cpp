#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "kgvqa/embedding.hpp"
#include "kgvqa/metrics.hpp"

namespace {

const std::vector<std::pair<std::string, std::string>> kPairs = {
    {"César Pelli", "césar pelli"},
    {"the architect was César Pelli", "César Pelli"},
    {"72 meters", "72 metre"},
    {"very high", "390 meters"},
    {"a man", "male"},
    {"Stockholm, Sweden", "Stockholm"},
};

void BM_ExactMatch(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& [p, g] : kPairs) benchmark::DoNotOptimize(kgvqa::exact_match(p, g));
  }
  state.SetItemsProcessed(state.iterations() * kPairs.size());
}
BENCHMARK(BM_ExactMatch);

void BM_SubstringMatch(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& [p, g] : kPairs) benchmark::DoNotOptimize(kgvqa::substring_match(p, g));
  }
  state.SetItemsProcessed(state.iterations() * kPairs.size());
}
BENCHMARK(BM_SubstringMatch);

void BM_StubSemantic(benchmark::State& state) {
  kgvqa::StubEmbeddingProvider stub;
  for (auto _ : state) {
    for (const auto& [p, g] : kPairs) benchmark::DoNotOptimize(kgvqa::semantic_score(p, g, stub));
  }
  state.SetItemsProcessed(state.iterations() * kPairs.size());
}
BENCHMARK(BM_StubSemantic);

void BM_ParseChoiceLetter(benchmark::State& state) {
  const std::vector<std::string> texts{"C", "(b)", "The answer is D.", "maybe", "a) Stockholm"};
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(kgvqa::parse_choice_letter(t));
  }
}
BENCHMARK(BM_ParseChoiceLetter);

}  // namespace
