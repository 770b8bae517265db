#include "kgvqa/splitter.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/rng.hpp"

namespace kgvqa {

std::set<std::string> qualifying_answers(std::span<const QAItem> dataset) {
  std::map<std::string, std::size_t> counts;
  for (const auto& q : dataset) ++counts[q.answer.text];
  std::set<std::string> out;
  for (const auto& [answer, n] : counts) {
    if (n * 100 >= dataset.size()) out.insert(answer);  // integer form of n / total >= 1%
  }
  return out;
}

std::string categorize_image(std::span<const QAItem* const> image_questions, const std::set<std::string>& qualifying) {
  std::map<std::string, int> counts;
  for (const auto* q : image_questions) {
    if (qualifying.contains(q->answer.text)) ++counts[q->answer.text];
  }
  std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string first = ranked.size() > 0 ? ranked[0].first : std::string(kNoAnswer);
  std::string second = ranked.size() > 1 ? ranked[1].first : std::string(kNoAnswer);
  return first + "|" + second;
}

std::map<std::string, std::vector<std::string>> image_categories(std::span<const QAItem> dataset) {
  auto qualifying = qualifying_answers(dataset);
  std::map<std::string, std::vector<const QAItem*>> by_image;
  for (const auto& q : dataset) by_image[q.image_id].push_back(&q);

  std::map<std::string, std::vector<std::string>> categories;
  for (const auto& [image, questions] : by_image) {
    categories[categorize_image(questions, qualifying)].push_back(image);
  }
  std::vector<std::string> singletons;
  for (auto it = categories.begin(); it != categories.end();) {
    if (it->second.size() == 1) {
      singletons.push_back(it->second.front());
      it = categories.erase(it);
    } else {
      ++it;
    }
  }
  if (!singletons.empty()) {
    auto& merged = categories[std::string(kSingletonCategory)];
    merged.insert(merged.end(), singletons.begin(), singletons.end());
    std::sort(merged.begin(), merged.end());
  }
  return categories;
}

std::size_t train_count(std::size_t members, double ratio) {
  if (members == 0) return 0;
  auto n = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(members)));
  n = std::max<std::size_t>(n, 1);
  if (members >= 2) n = std::min(n, members - 1);
  return n;
}

DatasetSplit split(std::span<const QAItem> dataset, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError(fmt::format("split ratio {} outside (0, 1)", ratio));
  DatasetSplit out;
  std::set<std::string> train_images;
  for (auto& [category, images] : image_categories(dataset)) {
    auto members = images;
    auto rng = substream(seed, "split|" + category);
    std::shuffle(members.begin(), members.end(), rng);
    auto n_train = train_count(members.size(), ratio);
    auto& entry = out.manifest[category];
    entry.train.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    entry.test.assign(members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
    std::sort(entry.train.begin(), entry.train.end());
    std::sort(entry.test.begin(), entry.test.end());
    train_images.insert(entry.train.begin(), entry.train.end());
  }
  for (const auto& q : dataset) {
    (train_images.contains(q.image_id) ? out.train : out.test).push_back(q);
  }
  return out;
}

nlohmann::json DatasetSplit::manifest_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [category, members] : manifest) j[category] = {{"train", members.train}, {"test", members.test}};
  return j;
}

}  // namespace kgvqa
