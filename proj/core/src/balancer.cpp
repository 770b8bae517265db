#include "kgvqa/balancer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/rng.hpp"

namespace kgvqa {

namespace {

std::map<std::string, int> image_counts(std::span<const QAItem> dataset) {
  std::map<std::string, int> counts;
  for (const auto& q : dataset) ++counts[q.image_id];
  return counts;
}

GroupRoundStats stats_of(const AnswerGroup& group, int removed) {
  return GroupRoundStats{removed, group.head(), group.tail(), group.head_tail_ratio()};
}

}  // namespace

void BalanceConfig::validate() const {
  if (rounds < 0) throw ConfigError("rounds must be >= 0");
  if (top_k < 2) throw ConfigError("top_k must be >= 2");
  if (!(ratio_max > 1.0)) throw ConfigError("ratio_max must be > 1");
  if (!(head_tail_target >= 1.0)) throw ConfigError("head_tail_target must be >= 1");
}

std::vector<AnswerGroup> build_groups(std::span<const QAItem> dataset) {
  std::map<std::string, AnswerGroup> groups;
  for (const auto& q : dataset) {
    auto& g = groups[q.group_key];
    g.group_key = q.group_key;
    g.question_index[q.answer.text].push_back(q.question_id);
  }
  std::vector<AnswerGroup> out;
  for (auto& [key, g] : groups) {
    for (auto& [answer, ids] : g.question_index) {
      std::sort(ids.begin(), ids.end());
      g.histogram.emplace_back(answer, static_cast<int>(ids.size()));
    }
    std::stable_sort(g.histogram.begin(), g.histogram.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    out.push_back(std::move(g));
  }
  return out;
}

TruncateResult truncate_top_k(const AnswerGroup& group, int k) {
  if (k < 1) throw InputError("top-k must be >= 1");
  TruncateResult out{group, {}};
  auto keep = std::min(out.group.histogram.size(), static_cast<std::size_t>(k));
  for (std::size_t i = keep; i < out.group.histogram.size(); ++i) {
    const auto& answer = out.group.histogram[i].first;
    auto& ids = out.group.question_index[answer];
    out.removed.insert(out.removed.end(), ids.begin(), ids.end());
    out.group.question_index.erase(answer);
  }
  out.group.histogram.resize(keep);
  std::sort(out.removed.begin(), out.removed.end());
  return out;
}

std::vector<QAItem> truncate_dataset(std::span<const QAItem> dataset, int k, std::size_t* removed) {
  std::set<std::string> drop;
  for (const auto& g : build_groups(dataset)) {
    auto r = truncate_top_k(g, k);
    drop.insert(r.removed.begin(), r.removed.end());
  }
  if (removed) *removed = drop.size();
  std::vector<QAItem> out;
  for (const auto& q : dataset) {
    if (!drop.contains(q.question_id)) out.push_back(q);
  }
  return out;
}

// Scanning from the head down, answer j is left alone while its frequency is
// within head_tail_target * tail. Otherwise it is cut to
// max(cap, ceil(ratio_max * freq_{j+1})); when that cut would not remove
// anything it falls back to max(cap, freq_{j+1}), so every round makes
// progress towards the cap. Targets never drop below freq_{j+1}, which keeps
// the order non-increasing.
std::vector<int> round_targets(const AnswerGroup& group, const BalanceConfig& config) {
  const auto& h = group.histogram;
  std::vector<int> targets;
  for (const auto& [answer, freq] : h) targets.push_back(freq);
  if (h.size() < 2) return targets;
  int tail = h.back().second;
  int cap = std::max(tail, static_cast<int>(std::floor(config.head_tail_target * tail + 1e-9)));
  for (std::size_t j = 0; j + 1 < h.size(); ++j) {
    int freq = h[j].second;
    if (freq <= cap) continue;
    int next = h[j + 1].second;
    int target = std::max(cap, static_cast<int>(std::ceil(config.ratio_max * next - 1e-9)));
    if (target >= freq) target = std::max(cap, next);
    targets[j] = std::min(freq, target);
  }
  return targets;
}

std::vector<QAItem> balance_round(std::span<const QAItem> dataset, const BalanceConfig& config, std::uint64_t seed,
                                  int round, RoundReport* report) {
  config.validate();
  const auto snapshot = image_counts(dataset);
  std::map<std::string, const QAItem*> by_id;
  for (const auto& q : dataset) by_id[q.question_id] = &q;

  std::set<std::string> removed;
  RoundReport local{round, 0, {}, {}};
  auto groups = build_groups(dataset);
  for (const auto& group : groups) {
    auto counts = snapshot;  // group-local view keeps groups order-independent
    auto targets = round_targets(group, config);
    int group_removed = 0;
    AnswerGroup after = group;
    for (std::size_t j = 0; j < group.histogram.size(); ++j) {
      const auto& [answer, freq] = group.histogram[j];
      int quota = freq - targets[j];
      after.histogram[j].second = targets[j];
      if (quota <= 0) continue;

      // Bucket this answer's questions by image, each bucket in seeded order.
      std::map<std::string, std::vector<std::string>> buckets;
      for (const auto& id : group.question_index.at(answer)) buckets[by_id.at(id)->image_id].push_back(id);
      for (auto& [image, ids] : buckets) {
        auto rng = substream(seed, fmt::format("balance|{}|{}|{}|{}", round, group.group_key, answer, image));
        std::shuffle(ids.begin(), ids.end(), rng);
        std::reverse(ids.begin(), ids.end());  // pop_back takes the first in seeded order
      }
      for (int n = 0; n < quota; ++n) {
        // Image with most remaining questions first, ties by image id.
        auto best = buckets.end();
        for (auto it = buckets.begin(); it != buckets.end(); ++it) {
          if (it->second.empty()) continue;
          if (best == buckets.end() || counts[it->first] > counts[best->first]) best = it;
        }
        auto victim = best->second.back();
        best->second.pop_back();
        local.victims.push_back(Victim{victim, best->first, counts[best->first]});
        --counts[best->first];
        removed.insert(victim);
        ++group_removed;
      }
    }
    local.groups[group.group_key] = stats_of(after, group_removed);
    local.removed += group_removed;
  }

  std::vector<QAItem> out;
  out.reserve(dataset.size() - removed.size());
  for (const auto& q : dataset) {
    if (!removed.contains(q.question_id)) out.push_back(q);
  }
  if (report) *report = std::move(local);
  return out;
}

BalanceResult balance(std::span<const QAItem> dataset, const BalanceConfig& config, std::uint64_t seed) {
  config.validate();
  BalanceResult result;
  result.report.config = config;
  result.report.initial_questions = dataset.size();
  if (config.rounds == 0) {
    result.dataset.assign(dataset.begin(), dataset.end());
  } else {
    result.dataset = truncate_dataset(dataset, config.top_k, &result.report.truncated);
  }
  for (const auto& g : build_groups(result.dataset)) result.report.initial_groups[g.group_key] = stats_of(g, 0);

  const auto before = image_counts(dataset);
  for (int r = 1; r <= config.rounds; ++r) {
    RoundReport round;
    result.dataset = balance_round(result.dataset, config, seed, r, &round);
    result.report.rounds.push_back(std::move(round));
  }
  const auto after = image_counts(result.dataset);
  for (const auto& [image, n] : before) {
    if (!after.contains(image)) result.report.images_dropped.push_back(image);
  }
  result.report.final_questions = result.dataset.size();
  return result;
}

nlohmann::json BalanceReport::to_json() const {
  auto groups_json = [](const std::map<std::string, GroupRoundStats>& groups) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, s] : groups) {
      j[key] = {{"removed", s.removed}, {"head_freq", s.head_freq}, {"tail_freq", s.tail_freq}, {"ratio", s.ratio}};
    }
    return j;
  };
  nlohmann::json rounds_json = nlohmann::json::array();
  for (const auto& r : rounds) {
    rounds_json.push_back({{"round", r.round}, {"removed", r.removed}, {"groups", groups_json(r.groups)}});
  }
  return {
      {"config",
       {{"rounds", config.rounds},
        {"top_k", config.top_k},
        {"ratio_max", config.ratio_max},
        {"head_tail_target", config.head_tail_target}}},
      {"initial_questions", initial_questions},
      {"truncated", truncated},
      {"final_questions", final_questions},
      {"initial_groups", groups_json(initial_groups)},
      {"rounds", rounds_json},
      {"images_dropped", images_dropped},
  };
}

}  // namespace kgvqa
