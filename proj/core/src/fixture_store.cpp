#include "kgvqa/fixture_store.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "kgvqa/errors.hpp"

namespace kgvqa {

namespace {

using nlohmann::json;

std::optional<std::string> label_in(const json& entity, const std::string& language) {
  auto it = entity.find("label");
  if (it == entity.end()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_object()) {
    if (auto l = it->find(language); l != it->end() && l->is_string()) return l->get<std::string>();
  }
  return std::nullopt;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(fmt::format("{}: missing field '{}'", where, key));
  return *it;
}

ObjectValue parse_object(const json& obj, const std::map<std::string, std::string>& labels,
                         const std::string& where) {
  auto kind = require(obj, "kind", where).get<std::string>();
  if (kind == "entity") {
    auto id = require(obj, "id", where).get<std::string>();
    auto it = labels.find(id);
    if (it == labels.end()) throw NotFoundError(id);
    return EntityRef{EntityId(id), it->second};
  }
  if (kind == "literal") {
    return Literal{require(obj, "value", where).get<std::string>()};
  }
  if (kind == "number") {
    double value = require(obj, "value", where).get<double>();
    if (!std::isfinite(value)) throw ValidationError(fmt::format("{}: non-finite number", where));
    return Quantity{value, obj.value("unit", std::string{})};
  }
  if (kind == "date") {
    auto precision = parse_date_precision(require(obj, "precision", where).get<std::string>());
    try {
      return Date::parse(require(obj, "value", where).get<std::string>(), precision);
    } catch (const InputError& e) {
      throw ValidationError(fmt::format("{}: {}", where, e.what()));
    }
  }
  throw ValidationError(fmt::format("{}: unknown object kind '{}'", where, kind));
}

}  // namespace

FixtureStore FixtureStore::load(const std::filesystem::path& path, const std::string& language) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open fixture '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return from_json(doc, language);
}

FixtureStore FixtureStore::from_json(const json& doc, const std::string& language) {
  if (!doc.is_object() || !doc.contains("entities") || !doc["entities"].is_object()) {
    throw ValidationError("fixture must be an object with an 'entities' object");
  }
  const auto& entities = doc["entities"];

  std::map<std::string, std::string> labels;
  for (const auto& [id, entity] : entities.items()) {
    if (auto label = label_in(entity, language)) {
      labels.emplace(id, *label);
    } else {
      spdlog::warn("fixture entity {} has no '{}' label; skipped", id, language);
    }
  }

  FixtureStore store;
  for (const auto& [id, entity] : entities.items()) {
    if (!labels.contains(id)) continue;
    EntityId eid(id);
    std::vector<Statement> statements;
    if (auto it = entity.find("statements"); it != entity.end()) {
      std::size_t index = 0;
      for (const auto& st : *it) {
        auto where = fmt::format("entity {} statement {}", id, index++);
        PropertyId property{require(st, "property_id", where).get<std::string>(),
                            require(st, "property_label", where).get<std::string>()};
        if (property.id.empty() || property.label.empty()) {
          throw ValidationError(fmt::format("{}: empty property id or label", where));
        }
        try {
          statements.push_back(Statement{eid, property, parse_object(require(st, "object", where), labels, where)});
        } catch (const NotFoundError& missing) {
          spdlog::warn("{}: object {} has no usable label; statement dropped", where, missing.what());
        }
      }
    }
    for (const auto& synset : entity.value("synsets", json::array())) {
      auto key = synset.get<std::string>();
      if (!KgStore::is_valid_synset_id(key)) {
        throw ValidationError(fmt::format("entity {}: malformed synset id '{}'", id, key));
      }
      if (auto [pos, fresh] = store.by_synset_.emplace(key, eid); !fresh && pos->second != eid) {
        throw ValidationError(fmt::format("synset {} annotated on both {} and {}", key, pos->second.str(), id));
      }
    }
    if (auto it = entity.find("commons_name"); it != entity.end() && it->is_string()) {
      auto key = it->get<std::string>();
      if (auto [pos, fresh] = store.by_commons_.emplace(key, eid); !fresh && pos->second != eid) {
        throw ValidationError(fmt::format("commons name '{}' on both {} and {}", key, pos->second.str(), id));
      }
    }
    store.statements_.emplace(std::move(eid), std::move(statements));
  }
  return store;
}

std::optional<EntityId> FixtureStore::find_by_synset(std::string_view synset_id) {
  if (auto it = by_synset_.find(synset_id); it != by_synset_.end()) return it->second;
  return std::nullopt;
}

std::optional<EntityId> FixtureStore::find_by_commons_name(std::string_view name) {
  if (auto it = by_commons_.find(name); it != by_commons_.end()) return it->second;
  return std::nullopt;
}

std::vector<Statement> FixtureStore::fetch_statements(const EntityId& entity) {
  auto it = statements_.find(entity);
  if (it == statements_.end()) throw NotFoundError(fmt::format("entity {} not in fixture", entity.str()));
  return it->second;
}

std::vector<Statement> FixtureStore::resident_statements() const {
  std::vector<Statement> all;
  for (const auto& [id, statements] : statements_) all.insert(all.end(), statements.begin(), statements.end());
  return all;
}

}  // namespace kgvqa
