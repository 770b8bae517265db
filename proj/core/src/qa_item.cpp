#include "kgvqa/qa_item.hpp"

#include <fmt/format.h>

#include "kgvqa/errors.hpp"

namespace kgvqa {

using nlohmann::json;

json to_json(const Answer& answer) {
  struct Visitor {
    const std::string& text;
    json operator()(const EntityRef& e) const { return {{"kind", "entity"}, {"entity_id", e.id.str()}, {"text", text}}; }
    json operator()(const Literal&) const { return {{"kind", "literal"}, {"text", text}}; }
    json operator()(const Quantity& q) const {
      return {{"kind", "number"}, {"value", q.value}, {"unit", q.unit}, {"text", text}};
    }
    json operator()(const Date& d) const {
      return {{"kind", "date"}, {"value", iso_string(d)}, {"precision", to_string(d.precision)}, {"text", text}};
    }
  };
  return std::visit(Visitor{answer.text}, answer.value);
}

Answer answer_from_json(const json& j) {
  auto kind = j.at("kind").get<std::string>();
  auto text = j.at("text").get<std::string>();
  if (kind == "entity") return Answer{EntityRef{EntityId(j.at("entity_id").get<std::string>()), text}, text};
  if (kind == "literal") return Answer{Literal{text}, text};
  if (kind == "number") {
    return Answer{Quantity{j.at("value").get<double>(), j.value("unit", std::string{})}, text};
  }
  if (kind == "date") {
    auto precision = parse_date_precision(j.at("precision").get<std::string>());
    return Answer{Date::parse(j.at("value").get<std::string>(), precision), text};
  }
  throw ValidationError(fmt::format("unknown answer kind '{}'", kind));
}

json to_json(const QAItem& item) {
  json domains = json::array();
  for (const auto& d : item.domains) domains.push_back(d.name());
  json j = {
      {"question_id", item.question_id},
      {"image_id", item.image_id},
      {"source", to_string(item.source)},
      {"main_object", item.main_object.str()},
      {"path", item.path.steps},
      {"hops", item.hops},
      {"uses_scene_graph", item.uses_scene_graph},
      {"question", item.question},
      {"answer", to_json(item.answer)},
      {"answer_category", to_string(item.answer_category)},
      {"choices", item.choices},
      {"gold_index", item.gold_index},
      {"domains", domains},
      {"group_key", item.group_key},
  };
  if (item.degenerate_range) j["degenerate_range"] = true;
  return j;
}

QAItem qa_item_from_json(const json& j) {
  QAItem item;
  item.question_id = j.at("question_id").get<std::string>();
  item.image_id = j.at("image_id").get<std::string>();
  item.source = parse_image_source(j.at("source").get<std::string>());
  item.main_object = EntityId(j.at("main_object").get<std::string>());
  item.path.steps = j.at("path").get<std::vector<std::string>>();
  item.hops = j.at("hops").get<int>();
  item.uses_scene_graph = j.at("uses_scene_graph").get<bool>();
  item.question = j.at("question").get<std::string>();
  item.answer = answer_from_json(j.at("answer"));
  item.answer_category = parse_answer_category(j.at("answer_category").get<std::string>());
  item.choices = j.at("choices").get<std::vector<std::string>>();
  item.gold_index = j.at("gold_index").get<int>();
  for (const auto& d : j.at("domains")) item.domains.insert(DomainTag::parse(d.get<std::string>()));
  item.group_key = j.at("group_key").get<std::string>();
  item.degenerate_range = j.value("degenerate_range", false);

  if (item.hops < 1 || item.hops > 3 || static_cast<std::size_t>(item.hops) != item.path.size()) {
    throw ValidationError(fmt::format("{}: hops {} inconsistent with path", item.question_id, item.hops));
  }
  if (item.group_key != item.path.outermost()) {
    throw ValidationError(fmt::format("{}: group_key must equal the outermost property", item.question_id));
  }
  if (!item.choices.empty()) {
    if (item.gold_index < 0 || static_cast<std::size_t>(item.gold_index) >= item.choices.size() ||
        item.choices[static_cast<std::size_t>(item.gold_index)] != item.answer.text) {
      throw ValidationError(fmt::format("{}: gold_index does not point at the answer", item.question_id));
    }
  }
  return item;
}

}  // namespace kgvqa
