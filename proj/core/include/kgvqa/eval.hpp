#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgvqa/embedding.hpp"
#include "kgvqa/qa_item.hpp"

namespace kgvqa {

// Exactly one of text (open-ended) or letter (multiple choice) is set.
struct Prediction {
  std::string question_id;
  std::optional<std::string> text;
  std::optional<std::string> letter;
};

// JSON lines {question_id, text | letter}.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

// Mean, population SD and SEM = SD / sqrt(n) of per-question scores on a
// 0-100 scale.
struct ScoreCell {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double sem = 0.0;
};

ScoreCell summarize(std::span<const double> scores);

struct MetricReport {
  ScoreCell overall;
  std::map<std::string, ScoreCell> by_hops;          // "1", "2", "3"
  std::map<std::string, ScoreCell> by_scene_graph;   // "true", "false"
  std::map<std::string, ScoreCell> by_source;        // "VG", "GLDv2"
};

inline constexpr std::string_view kMetricExact = "exact";
inline constexpr std::string_view kMetricSubstring = "substring";
inline constexpr std::string_view kMetricSemantic = "semantic";          // thresholded, headline
inline constexpr std::string_view kMetricSemanticRaw = "semantic_raw";  // mean similarity
inline constexpr std::string_view kMetricMultipleChoice = "mc";

struct ScoreReport {
  double threshold = 0.7;
  std::string provider;
  std::size_t n_questions = 0;    // dataset size
  std::size_t n_predictions = 0;
  std::size_t unparsed = 0;       // letter answers that did not parse
  std::map<std::string, MetricReport> metrics;

  nlohmann::json to_json() const;
  // Aligned plain-text table, one row per (metric, cell).
  std::string to_text() const;
};

struct EvalConfig {
  std::set<std::string> metrics = {std::string(kMetricExact), std::string(kMetricSubstring),
                                   std::string(kMetricSemantic), std::string(kMetricMultipleChoice)};
  double threshold = 0.7;  // similarity >= threshold counts as correct

  void validate() const;
};

// Per-question scores for one metric, keyed by question id, on a 0-100 scale.
using MetricScores = std::map<std::string, std::vector<std::pair<std::string, double>>>;

// Groups scores into overall and breakdown cells. Throws InputError listing
// every question id not present in the dataset.
ScoreReport aggregate(const MetricScores& scores, std::span<const QAItem> dataset);

// Scores predictions with the configured metrics. `provider` is required
// only when the semantic metric is enabled.
ScoreReport evaluate(std::span<const QAItem> dataset, std::span<const Prediction> predictions,
                     const EvalConfig& config, EmbeddingProvider* provider);

}  // namespace kgvqa
