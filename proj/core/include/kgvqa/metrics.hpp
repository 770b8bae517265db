#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgvqa {

// Trim, Unicode lower-case, collapse internal whitespace.
std::string normalize_answer(std::string_view text);

// Normalized words with leading/trailing punctuation stripped; empty words dropped.
std::vector<std::string> answer_words(std::string_view text);

int exact_match(std::string_view pred, std::string_view gold);

// 1 when all words of the shorter answer occur among the words of the
// longer (either direction), or when the answers match exactly.
int substring_match(std::string_view pred, std::string_view gold);

// Choice index for a free-form letter answer: a bare letter ("b", "C.",
// "(D)") or the first standalone capital A-D in a sentence. nullopt when
// nothing parses.
std::optional<int> parse_choice_letter(std::string_view text, int choices = 4);

struct McScore {
  int score = 0;
  bool parsed = false;
};

McScore mc_score(std::string_view pred_letter, int gold_index, int choices = 4);

}  // namespace kgvqa
