#pragma once

#include <span>
#include <string>
#include <vector>

#include "kgvqa/qa_item.hpp"
#include "kgvqa/rng.hpp"
#include "kgvqa/template_bank.hpp"

namespace kgvqa {

inline constexpr int kDefaultDistractors = 3;

struct DistractorContext {
  std::span<const std::string> fixed_pool;    // template's closed answer set
  std::span<const std::string> literal_pool;  // every value of the same property in the graph
};

struct Distractors {
  std::vector<std::string> values;
  bool degenerate_range = false;
};

// Closed interval numeric distractors are drawn from. For gold i > 0 this is
// [i/2, max(1.5 i, i/2 + 2N)]; otherwise [i - N, i + N] with degenerate set.
struct NumericRange {
  double low = 0.0;
  double high = 0.0;
  bool degenerate = false;
};

NumericRange numeric_distractor_range(double gold, int count);

// Decimal places in the shortest rendering of `value` (0 for integers).
int decimal_places(double value);

// Up to `count` distinct values in the range, none equal to gold, each with
// gold's decimal places.
std::vector<double> number_distractors(double gold, int count, Rng& rng);

// Up to `count` distinct dates within +/-10 years of gold, at gold's precision.
std::vector<Date> date_distractors(const Date& gold, int count, Rng& rng);

// Up to `count` distinct pool entries different from gold.
std::vector<std::string> pool_distractors(std::string_view gold, std::span<const std::string> pool, int count,
                                          Rng& rng);

Distractors gen_false_choices(const Answer& gold, AnswerCategory category, const DistractorContext& context,
                              int count, Rng& rng);

// The bank's category for the property, demoted to literal when the answer's
// type does not fit a date/number category.
AnswerCategory categorize(const Template& tmpl, const Answer& answer);

struct ShuffledChoices {
  std::vector<std::string> choices;
  int gold_index = 0;
};

ShuffledChoices shuffle_choices(const std::string& gold, const std::vector<std::string>& distractors, Rng& rng);

}  // namespace kgvqa
