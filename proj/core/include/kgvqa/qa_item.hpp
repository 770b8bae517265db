#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgvqa/concept_linker.hpp"
#include "kgvqa/kg_types.hpp"
#include "kgvqa/template_bank.hpp"

namespace kgvqa {

// Gold answer: the structured KG object plus its rendered text.
struct Answer {
  ObjectValue value;
  std::string text;

  static Answer from(const ObjectValue& value) { return Answer{value, render(value)}; }
};

// Innermost-first property labels; step 0 applies to the main object.
struct PropertyPath {
  std::vector<std::string> steps;

  std::size_t size() const { return steps.size(); }
  const std::string& outermost() const { return steps.back(); }
  auto operator<=>(const PropertyPath&) const = default;
};

struct QAItem {
  std::string question_id;
  std::string image_id;
  ImageSource source = ImageSource::kVG;
  EntityId main_object;
  PropertyPath path;
  int hops = 1;
  bool uses_scene_graph = false;
  std::string question;
  Answer answer;
  AnswerCategory answer_category = AnswerCategory::kLiteral;
  std::vector<std::string> choices;
  int gold_index = 0;
  std::set<DomainTag> domains;
  std::string group_key;
  bool degenerate_range = false;  // numeric distractors drawn from [i-N, i+N]
};

nlohmann::json to_json(const Answer& answer);
Answer answer_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QAItem& item);
QAItem qa_item_from_json(const nlohmann::json& j);

}  // namespace kgvqa
