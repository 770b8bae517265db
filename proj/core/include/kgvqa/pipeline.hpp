#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kgvqa/balancer.hpp"
#include "kgvqa/eval.hpp"
#include "kgvqa/question_generator.hpp"
#include "kgvqa/splitter.hpp"
#include "kgvqa/stats.hpp"

namespace kgvqa {

namespace artifacts {
inline constexpr const char* kRaw = "raw.jsonl";
inline constexpr const char* kSkips = "generate_report.json";
inline constexpr const char* kBalanced = "balanced.jsonl";
inline constexpr const char* kBalanceReport = "balance_report.json";
inline constexpr const char* kTrain = "train.jsonl";
inline constexpr const char* kTest = "test.jsonl";
inline constexpr const char* kSplitManifest = "split_manifest.json";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kEvalJson = "eval_report.json";
inline constexpr const char* kEvalText = "eval_report.txt";
}  // namespace artifacts

struct RunConfig {
  // Exactly one backend.
  std::optional<std::filesystem::path> fixture;
  std::optional<std::string> endpoint;
  std::string language = "en";
  int timeout_seconds = 30;

  std::optional<std::filesystem::path> vg_objects;
  std::optional<std::filesystem::path> vg_relations;
  std::optional<std::filesystem::path> gld_csv;
  std::optional<std::filesystem::path> wordnet_index;
  std::filesystem::path templates;

  GeneratorConfig generator;  // its seed is overwritten by `seed`
  BalanceConfig balance;
  double split_ratio = 0.7;
  std::optional<std::uint64_t> seed;  // mandatory
  std::filesystem::path output_dir;

  bool skip_generate = false;
  bool skip_balance = false;
  bool skip_split = false;
  bool skip_stats = false;

  // Throws ConfigError. Checks that every referenced input file exists.
  void validate() const;
};

struct GenerateSummary {
  std::size_t images = 0;
  std::size_t objects = 0;
  std::size_t questions = 0;
  std::vector<SkipRecord> skips;
  nlohmann::json to_json() const;
};

// Each stage reads its input from and writes its artifacts to
// config.output_dir. Failures other than ConfigError surface as StageError.
GenerateSummary run_generate(const RunConfig& config);
BalanceReport run_balance(const RunConfig& config);
DatasetSplit run_split(const RunConfig& config);
// stats.json holds one entry per dataset artifact present in the output dir.
nlohmann::json run_stats(const RunConfig& config);
// All non-skipped stages in order.
void run_all(const RunConfig& config);

struct EvalRun {
  std::filesystem::path dataset;
  std::filesystem::path predictions;
  std::filesystem::path output_dir;
  std::string provider = "stub";
  EvalConfig config;
};

ScoreReport run_eval(const EvalRun& run);

}  // namespace kgvqa
