#include "kgvqa/stats.hpp"

#include <set>

#include "kgvqa/errors.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

DatasetStats compute_stats(std::span<const QAItem> dataset) {
  if (dataset.empty()) throw InputError("cannot compute statistics of an empty dataset");
  DatasetStats s;
  std::set<std::string> images, questions, answers, choices;
  std::size_t question_words = 0, answer_words = 0;
  for (const auto& q : dataset) {
    images.insert(q.image_id);
    questions.insert(q.question);
    answers.insert(q.answer.text);
    choices.insert(q.choices.begin(), q.choices.end());
    ++s.n_per_hop.at(static_cast<std::size_t>(q.hops - 1));
    question_words += split_whitespace(q.question).size();
    answer_words += split_whitespace(q.answer.text).size();
    for (const auto& d : q.domains) ++s.per_domain[std::string(d.name())];
    ++s.per_source[std::string(to_string(q.source))];
  }
  s.n_images = images.size();
  s.n_questions = dataset.size();
  s.n_unique_questions = questions.size();
  s.n_unique_answers = answers.size();
  s.n_unique_choices = choices.size();
  s.avg_question_len_words = static_cast<double>(question_words) / static_cast<double>(dataset.size());
  s.avg_answer_len_words = static_cast<double>(answer_words) / static_cast<double>(dataset.size());
  return s;
}

nlohmann::json DatasetStats::to_json() const {
  return {
      {"n_images", n_images},
      {"n_questions", n_questions},
      {"n_per_hop", n_per_hop},
      {"n_unique_questions", n_unique_questions},
      {"n_unique_answers", n_unique_answers},
      {"n_unique_choices", n_unique_choices},
      {"avg_question_len_words", avg_question_len_words},
      {"avg_answer_len_words", avg_answer_len_words},
      {"per_domain", per_domain},
      {"per_source", per_source},
  };
}

}  // namespace kgvqa
