#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgvqa/kg_types.hpp"

namespace kgvqa {

// Wikidata ids of the two class-bearing properties.
inline constexpr std::string_view kInstanceOf = "P31";
inline constexpr std::string_view kSubclassOf = "P279";

// A source of knowledge-graph facts. Implementations return statements in
// any order; KgStore sorts. Transport failures throw TransportError and are
// never reported as an empty result.
class KgBackend {
 public:
  virtual ~KgBackend() = default;

  virtual std::optional<EntityId> find_by_synset(std::string_view synset_id) = 0;
  virtual std::optional<EntityId> find_by_commons_name(std::string_view name) = 0;
  // Throws NotFoundError when the entity is unknown to the backend.
  virtual std::vector<Statement> fetch_statements(const EntityId& entity) = 0;

  // Every statement the backend holds in memory. The fixture backend returns
  // the whole graph; remote backends return nothing and rely on the
  // KgStore cache instead.
  virtual std::vector<Statement> resident_statements() const { return {}; }
};

// Property-id filter for statements_of. std::nullopt admits everything; an
// empty set admits nothing.
using PropertyFilter = std::optional<std::set<std::string>>;

// Uniform access to facts with a per-run statement cache keyed by entity id.
// Thread-safe.
class KgStore {
 public:
  explicit KgStore(std::unique_ptr<KgBackend> backend);

  // synset_id must look like "06887235-n" (8 digits, dash, lower-case
  // letter); throws InputError otherwise.
  std::optional<EntityId> entity_by_synset_id(std::string_view synset_id);
  std::optional<EntityId> entity_by_commons_name(std::string_view name);

  // Sorted by property id, then object.
  std::vector<Statement> statements_of(const EntityId& entity, const PropertyFilter& properties = std::nullopt);

  // Lower-cased label of the first "instance of" object, falling back to
  // "subclass of". Throws MissingClassError when neither exists.
  std::string class_name_of(const EntityId& entity);

  // Breadth-first expansion through entity-valued objects, 1 <= depth <= 3.
  KnowledgeSubgraph neighborhood(const EntityId& root, int depth);

  // Sorted, de-duplicated rendered objects of `property_id` across every
  // statement loaded so far (or resident in the backend).
  std::vector<std::string> property_values(std::string_view property_id);

  static bool is_valid_synset_id(std::string_view synset_id);

 private:
  const std::vector<Statement>& cached(const EntityId& entity);

  std::unique_ptr<KgBackend> backend_;
  std::mutex mu_;
  std::map<EntityId, std::vector<Statement>> cache_;
  std::optional<std::map<std::string, std::set<std::string>>> resident_values_;
};

}  // namespace kgvqa
