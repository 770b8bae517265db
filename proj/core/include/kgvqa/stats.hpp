#pragma once

#include <array>
#include <map>
#include <span>
#include <string>

#include <json.hpp>

#include "kgvqa/qa_item.hpp"

namespace kgvqa {

struct DatasetStats {
  std::size_t n_images = 0;
  std::size_t n_questions = 0;
  std::array<std::size_t, 3> n_per_hop{};  // index 0 = 1-hop
  std::size_t n_unique_questions = 0;
  std::size_t n_unique_answers = 0;
  std::size_t n_unique_choices = 0;
  double avg_question_len_words = 0.0;
  double avg_answer_len_words = 0.0;
  std::map<std::string, std::size_t> per_domain;
  std::map<std::string, std::size_t> per_source;

  nlohmann::json to_json() const;
};

// Throws InputError on an empty dataset. Word counts split on whitespace.
DatasetStats compute_stats(std::span<const QAItem> dataset);

}  // namespace kgvqa
