#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgvqa/qa_item.hpp"

namespace kgvqa {

inline constexpr std::string_view kSingletonCategory = "__singleton__";
inline constexpr std::string_view kNoAnswer = "∅";

// Answers whose occurrence count is at least 1% of all answers.
std::set<std::string> qualifying_answers(std::span<const QAItem> dataset);

// "a1|a2": the image's two most frequent qualifying answers (ties
// lexicographic), padded with "∅".
std::string categorize_image(std::span<const QAItem* const> image_questions, const std::set<std::string>& qualifying);

struct CategoryMembers {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

struct DatasetSplit {
  std::vector<QAItem> train;
  std::vector<QAItem> test;
  std::map<std::string, CategoryMembers> manifest;  // category -> image ids

  nlohmann::json manifest_json() const;
};

// Image ids per category, singleton categories merged into "__singleton__".
std::map<std::string, std::vector<std::string>> image_categories(std::span<const QAItem> dataset);

// floor(ratio * n) images of each category go to train, with at least one
// train image and, for n >= 2, at least one test image.
std::size_t train_count(std::size_t members, double ratio);

DatasetSplit split(std::span<const QAItem> dataset, double ratio, std::uint64_t seed);

}  // namespace kgvqa
