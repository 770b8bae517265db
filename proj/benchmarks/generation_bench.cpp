#include <benchmark/benchmark.h>

#include <filesystem>

#include <spdlog/spdlog.h>

#include "kgvqa/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

kgvqa::RunConfig fixture_config(const fs::path& out, int hops) {
  const fs::path dir = KGVQA_FIXTURE_DIR;
  kgvqa::RunConfig c;
  c.fixture = dir / "kg.json";
  c.vg_objects = dir / "vg_objects.jsonl";
  c.vg_relations = dir / "vg_relations.jsonl";
  c.gld_csv = dir / "gld.csv";
  c.wordnet_index = dir / "wordnet_index.tsv";
  c.templates = KGVQA_TEMPLATES;
  c.generator.max_hops = hops;
  c.seed = 7;
  c.output_dir = out;
  return c;
}

// End to end generate stage over the fixture corpus, including file output.
void BM_GenerateFixture(benchmark::State& state) {
  spdlog::set_level(spdlog::level::err);
  auto out = fs::temp_directory_path() / "kgvqa-bench-generate";
  auto config = fixture_config(out, static_cast<int>(state.range(0)));
  std::size_t questions = 0;
  for (auto _ : state) {
    questions = kgvqa::run_generate(config).questions;
  }
  state.counters["questions"] = static_cast<double>(questions);
  fs::remove_all(out);
}
BENCHMARK(BM_GenerateFixture)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_FullRun(benchmark::State& state) {
  spdlog::set_level(spdlog::level::err);
  auto out = fs::temp_directory_path() / "kgvqa-bench-run";
  auto config = fixture_config(out, 2);
  for (auto _ : state) kgvqa::run_all(config);
  fs::remove_all(out);
}
BENCHMARK(BM_FullRun)->Unit(benchmark::kMillisecond);

}  // namespace
