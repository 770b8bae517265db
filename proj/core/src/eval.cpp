#include "kgvqa/eval.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/metrics.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

namespace {

using nlohmann::json;

json cell_json(const ScoreCell& c) {
  if (c.n == 0) return {{"n", 0}, {"accuracy", nullptr}, {"sd", nullptr}, {"sem", nullptr}};
  return {{"n", c.n}, {"accuracy", c.mean}, {"sd", c.sd}, {"sem", c.sem}};
}

json cells_json(const std::map<std::string, ScoreCell>& cells) {
  json j = json::object();
  for (const auto& [key, c] : cells) j[key] = cell_json(c);
  return j;
}

}  // namespace

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open predictions '{}'", path.string()));
  std::vector<Prediction> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      Prediction p;
      p.question_id = j.at("question_id").get<std::string>();
      if (j.contains("text")) p.text = j["text"].get<std::string>();
      if (j.contains("letter")) p.letter = j["letter"].get<std::string>();
      if (p.text.has_value() == p.letter.has_value()) {
        throw ValidationError("exactly one of 'text' or 'letter' is required");
      }
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
  return out;
}

ScoreCell summarize(std::span<const double> scores) {
  ScoreCell c;
  c.n = scores.size();
  if (c.n == 0) return c;
  double sum = 0;
  for (double s : scores) sum += s;
  c.mean = sum / static_cast<double>(c.n);
  double sq = 0;
  for (double s : scores) sq += (s - c.mean) * (s - c.mean);
  c.sd = std::sqrt(sq / static_cast<double>(c.n));
  c.sem = c.sd / std::sqrt(static_cast<double>(c.n));
  return c;
}

void EvalConfig::validate() const {
  static const std::set<std::string, std::less<>> known = {
      std::string(kMetricExact), std::string(kMetricSubstring), std::string(kMetricSemantic),
      std::string(kMetricSemanticRaw), std::string(kMetricMultipleChoice)};
  for (const auto& m : metrics) {
    if (!known.contains(m)) throw ConfigError(fmt::format("unknown metric '{}'", m));
  }
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw ConfigError("similarity threshold must be within [-1, 1]");
}

ScoreReport aggregate(const MetricScores& scores, std::span<const QAItem> dataset) {
  std::map<std::string, const QAItem*> index;
  for (const auto& q : dataset) index.emplace(q.question_id, &q);

  std::set<std::string> unknown;
  for (const auto& [metric, rows] : scores) {
    for (const auto& [id, value] : rows) {
      if (!index.contains(id)) unknown.insert(id);
    }
  }
  if (!unknown.empty()) {
    throw InputError(fmt::format("predictions for unknown question ids: {}",
                                 join({unknown.begin(), unknown.end()}, ", ")));
  }

  ScoreReport report;
  report.n_questions = dataset.size();
  for (const auto& [metric, rows] : scores) {
    std::vector<double> all;
    std::map<std::string, std::vector<double>> hops{{"1", {}}, {"2", {}}, {"3", {}}};
    std::map<std::string, std::vector<double>> scene{{"true", {}}, {"false", {}}};
    std::map<std::string, std::vector<double>> source{{"VG", {}}, {"GLDv2", {}}};
    for (const auto& [id, value] : rows) {
      const auto* q = index.at(id);
      all.push_back(value);
      hops[std::to_string(q->hops)].push_back(value);
      scene[q->uses_scene_graph ? "true" : "false"].push_back(value);
      source[std::string(to_string(q->source))].push_back(value);
    }
    auto& m = report.metrics[metric];
    m.overall = summarize(all);
    for (auto& [k, v] : hops) m.by_hops[k] = summarize(v);
    for (auto& [k, v] : scene) m.by_scene_graph[k] = summarize(v);
    for (auto& [k, v] : source) m.by_source[k] = summarize(v);
  }
  return report;
}

ScoreReport evaluate(std::span<const QAItem> dataset, std::span<const Prediction> predictions,
                     const EvalConfig& config, EmbeddingProvider* provider) {
  config.validate();
  bool semantic = config.metrics.contains(std::string(kMetricSemantic)) ||
                  config.metrics.contains(std::string(kMetricSemanticRaw));
  if (semantic && !provider) throw ConfigError("semantic metric requested without an embedding provider");

  std::map<std::string, const QAItem*> index;
  for (const auto& q : dataset) index.emplace(q.question_id, &q);
  std::set<std::string> unknown;
  for (const auto& p : predictions) {
    if (!index.contains(p.question_id)) unknown.insert(p.question_id);
  }
  if (!unknown.empty()) {
    throw InputError(fmt::format("predictions for unknown question ids: {}",
                                 join({unknown.begin(), unknown.end()}, ", ")));
  }

  MetricScores scores;
  for (const auto& m : config.metrics) scores[m];
  std::size_t unparsed = 0;

  // Open-ended answers are embedded in one batch per run.
  std::vector<std::string> texts;
  std::vector<const Prediction*> open;
  for (const auto& p : predictions) {
    const auto* q = index.at(p.question_id);
    if (p.text) {
      open.push_back(&p);
      if (config.metrics.contains(std::string(kMetricExact))) {
        scores[std::string(kMetricExact)].emplace_back(p.question_id, 100.0 * exact_match(*p.text, q->answer.text));
      }
      if (config.metrics.contains(std::string(kMetricSubstring))) {
        scores[std::string(kMetricSubstring)].emplace_back(p.question_id,
                                                           100.0 * substring_match(*p.text, q->answer.text));
      }
      if (semantic) {
        texts.push_back(*p.text);
        texts.push_back(q->answer.text);
      }
    } else if (config.metrics.contains(std::string(kMetricMultipleChoice))) {
      auto mc = mc_score(*p.letter, q->gold_index, static_cast<int>(std::max<std::size_t>(q->choices.size(), 1)));
      if (!mc.parsed) ++unparsed;
      scores[std::string(kMetricMultipleChoice)].emplace_back(p.question_id, 100.0 * mc.score);
    }
  }
  if (semantic && !open.empty()) {
    auto vectors = provider->embed(texts);
    if (vectors.size() != texts.size()) throw TransportError("embedding provider returned a short batch");
    for (std::size_t i = 0; i < open.size(); ++i) {
      double sim = cosine(vectors[2 * i], vectors[2 * i + 1]);
      if (config.metrics.contains(std::string(kMetricSemantic))) {
        scores[std::string(kMetricSemantic)].emplace_back(open[i]->question_id,
                                                          sim >= config.threshold ? 100.0 : 0.0);
      }
      if (config.metrics.contains(std::string(kMetricSemanticRaw))) {
        scores[std::string(kMetricSemanticRaw)].emplace_back(open[i]->question_id, 100.0 * sim);
      }
    }
  }

  auto report = aggregate(scores, dataset);
  report.threshold = config.threshold;
  report.provider = provider ? provider->name() : "none";
  report.n_predictions = predictions.size();
  report.unparsed = unparsed;
  return report;
}

json ScoreReport::to_json() const {
  json metrics_json = json::object();
  for (const auto& [name, m] : metrics) {
    metrics_json[name] = {{"overall", cell_json(m.overall)},
                          {"by_hops", cells_json(m.by_hops)},
                          {"by_scene_graph", cells_json(m.by_scene_graph)},
                          {"by_source", cells_json(m.by_source)}};
  }
  return {{"similarity_threshold", threshold}, {"provider", provider},        {"n_questions", n_questions},
          {"n_predictions", n_predictions},    {"unparsed_letters", unparsed}, {"metrics", metrics_json}};
}

std::string ScoreReport::to_text() const {
  std::string out = fmt::format("similarity threshold (tau) = {:.3f}   provider = {}   predictions = {} / {}\n",
                                threshold, provider, n_predictions, n_questions);
  if (unparsed) out += fmt::format("unparsed letter answers = {}\n", unparsed);
  out += fmt::format("{:<14} {:<16} {:>8} {:>9} {:>9} {:>9}\n", "metric", "cell", "n", "accuracy", "SD", "SEM");
  auto row = [&](const std::string& metric, const std::string& cell, const ScoreCell& c) {
    if (c.n == 0) {
      out += fmt::format("{:<14} {:<16} {:>8} {:>9} {:>9} {:>9}\n", metric, cell, 0, "-", "-", "-");
    } else {
      out += fmt::format("{:<14} {:<16} {:>8} {:>9.1f} {:>9.1f} {:>9.2f}\n", metric, cell, c.n, c.mean, c.sd, c.sem);
    }
  };
  for (const auto& [name, m] : metrics) {
    row(name, "overall", m.overall);
    for (const auto& [k, c] : m.by_hops) row(name, k + "-hop", c);
    for (const auto& [k, c] : m.by_scene_graph) row(name, k == "true" ? "scene-graph" : "no-scene-graph", c);
    for (const auto& [k, c] : m.by_source) row(name, k, c);
  }
  return out;
}

}  // namespace kgvqa
