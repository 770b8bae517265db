#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "kgvqa/kg_store.hpp"

namespace kgvqa {

// Offline backend over a single JSON document:
//
//   {"entities": {"Q34": {"label": "Sweden" | {"en": "Sweden", ...},
//                         "synsets": ["08761868-n"],
//                         "commons_name": "Sweden",
//                         "statements": [{"property_id": "P36",
//                                         "property_label": "capital",
//                                         "object": {"kind": "entity", "id": "Q1754"}}]}}}
//
// Object kinds: entity {id}, literal {value}, number {value, unit?},
// date {value: "YYYY[-MM[-DD]]", precision: year|month|day}.
class FixtureStore : public KgBackend {
 public:
  static FixtureStore load(const std::filesystem::path& path, const std::string& language = "en");
  static FixtureStore from_json(const nlohmann::json& doc, const std::string& language = "en");

  std::optional<EntityId> find_by_synset(std::string_view synset_id) override;
  std::optional<EntityId> find_by_commons_name(std::string_view name) override;
  std::vector<Statement> fetch_statements(const EntityId& entity) override;
  std::vector<Statement> resident_statements() const override;

  std::size_t entity_count() const { return statements_.size(); }

 private:
  FixtureStore() = default;

  std::map<EntityId, std::vector<Statement>> statements_;
  std::map<std::string, EntityId, std::less<>> by_synset_;
  std::map<std::string, EntityId, std::less<>> by_commons_;
};

}  // namespace kgvqa
