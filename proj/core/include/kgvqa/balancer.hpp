#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgvqa/qa_item.hpp"

namespace kgvqa {

struct BalanceConfig {
  int rounds = 20;
  int top_k = 10;
  double ratio_max = 1.5;         // cap on freq_j / freq_{j+1} targeted per round
  double head_tail_target = 3.0;  // answers at or below target * tail are left alone

  void validate() const;
};

// All questions sharing an outermost property.
struct AnswerGroup {
  std::string group_key;
  std::vector<std::pair<std::string, int>> histogram;              // descending, ties lexicographic
  std::map<std::string, std::vector<std::string>> question_index;  // answer -> question ids

  int head() const { return histogram.empty() ? 0 : histogram.front().second; }
  int tail() const { return histogram.empty() ? 0 : histogram.back().second; }
  double head_tail_ratio() const { return histogram.empty() ? 1.0 : double(head()) / tail(); }
};

// One group per distinct group_key, sorted by key.
std::vector<AnswerGroup> build_groups(std::span<const QAItem> dataset);

struct TruncateResult {
  AnswerGroup group;
  std::vector<std::string> removed;  // question ids of answers ranked below k
};

TruncateResult truncate_top_k(const AnswerGroup& group, int k);

// Applies truncate_top_k to every group and drops the removed questions.
std::vector<QAItem> truncate_dataset(std::span<const QAItem> dataset, int k, std::size_t* removed = nullptr);

// Per-answer frequency targets for one round, aligned with group.histogram.
std::vector<int> round_targets(const AnswerGroup& group, const BalanceConfig& config);

struct GroupRoundStats {
  int removed = 0;
  int head_freq = 0;
  int tail_freq = 0;
  double ratio = 1.0;
};

struct Victim {
  std::string question_id;
  std::string image_id;
  int image_questions = 0;  // questions the image had (in the round snapshot) when chosen
};

struct RoundReport {
  int round = 0;
  int removed = 0;
  std::map<std::string, GroupRoundStats> groups;
  std::vector<Victim> victims;
};

struct BalanceReport {
  BalanceConfig config;
  std::size_t initial_questions = 0;
  std::size_t truncated = 0;
  std::size_t final_questions = 0;
  std::map<std::string, GroupRoundStats> initial_groups;  // after truncation
  std::vector<RoundReport> rounds;
  std::vector<std::string> images_dropped;

  nlohmann::json to_json() const;
};

// One smoothing pass. Groups are processed independently against a snapshot
// of per-image question counts taken at the start of the round.
std::vector<QAItem> balance_round(std::span<const QAItem> dataset, const BalanceConfig& config, std::uint64_t seed,
                                  int round, RoundReport* report = nullptr);

struct BalanceResult {
  std::vector<QAItem> dataset;
  BalanceReport report;
};

// Truncates to top_k once, then runs config.rounds rounds. rounds == 0 is the identity.
BalanceResult balance(std::span<const QAItem> dataset, const BalanceConfig& config, std::uint64_t seed);

}  // namespace kgvqa
