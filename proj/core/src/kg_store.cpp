#include "kgvqa/kg_store.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

KgStore::KgStore(std::unique_ptr<KgBackend> backend) : backend_(std::move(backend)) {
  if (!backend_) throw InputError("KgStore needs a backend");
}

bool KgStore::is_valid_synset_id(std::string_view synset_id) {
  if (synset_id.size() != 10 || synset_id[8] != '-') return false;
  for (std::size_t i = 0; i < 8; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(synset_id[i]))) return false;
  }
  // Shape only: an unknown part-of-speech letter is simply never found.
  return synset_id[9] >= 'a' && synset_id[9] <= 'z';
}

std::optional<EntityId> KgStore::entity_by_synset_id(std::string_view synset_id) {
  if (!is_valid_synset_id(synset_id)) {
    throw InputError(fmt::format("malformed synset id '{}'", synset_id));
  }
  return backend_->find_by_synset(synset_id);
}

std::optional<EntityId> KgStore::entity_by_commons_name(std::string_view name) {
  if (name.empty()) throw InputError("commons name must be non-empty");
  return backend_->find_by_commons_name(name);
}

const std::vector<Statement>& KgStore::cached(const EntityId& entity) {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(entity); it != cache_.end()) return it->second;
  }
  // Fetch outside the lock so slow remote calls do not serialize readers.
  auto statements = backend_->fetch_statements(entity);
  std::sort(statements.begin(), statements.end(), [](const Statement& a, const Statement& b) {
    if (a.property.id != b.property.id) return a.property.id < b.property.id;
    return a.object < b.object;
  });
  statements.erase(std::unique(statements.begin(), statements.end(),
                               [](const Statement& a, const Statement& b) { return a == b; }),
                   statements.end());
  std::lock_guard lock(mu_);
  auto [it, inserted] = cache_.try_emplace(entity, std::move(statements));
  return it->second;
}

std::vector<Statement> KgStore::statements_of(const EntityId& entity, const PropertyFilter& properties) {
  const auto& all = cached(entity);
  if (!properties) return all;
  std::vector<Statement> out;
  for (const auto& s : all) {
    if (properties->contains(s.property.id)) out.push_back(s);
  }
  return out;
}

std::string KgStore::class_name_of(const EntityId& entity) {
  const auto& all = cached(entity);
  for (auto property : {kInstanceOf, kSubclassOf}) {
    for (const auto& s : all) {
      if (s.property.id != property) continue;
      if (const auto* ref = as_entity(s.object); ref && !ref->label.empty()) {
        return utf8_lower(ref->label);
      }
    }
  }
  throw MissingClassError(fmt::format("entity {} has neither instance-of nor subclass-of", entity.str()));
}

KnowledgeSubgraph KgStore::neighborhood(const EntityId& root, int depth) {
  if (depth < 1 || depth > 3) {
    throw InputError(fmt::format("neighborhood depth {} outside 1..3", depth));
  }
  KnowledgeSubgraph graph{root, {}, depth};
  std::set<EntityId> seen{root};
  std::deque<std::pair<EntityId, int>> frontier{{root, 1}};
  while (!frontier.empty()) {
    auto [entity, level] = frontier.front();
    frontier.pop_front();
    for (const auto& s : cached(entity)) {
      graph.statements.push_back(s);
      if (level >= depth) continue;
      if (const auto* ref = as_entity(s.object); ref && seen.insert(ref->id).second) {
        frontier.emplace_back(ref->id, level + 1);
      }
    }
  }
  return graph;
}

std::vector<std::string> KgStore::property_values(std::string_view property_id) {
  std::set<std::string> values;
  {
    std::lock_guard lock(mu_);
    if (!resident_values_) {
      resident_values_.emplace();
      for (const auto& s : backend_->resident_statements()) {
        (*resident_values_)[s.property.id].insert(render(s.object));
      }
    }
    if (auto it = resident_values_->find(std::string(property_id)); it != resident_values_->end()) {
      values = it->second;
    }
    for (const auto& [entity, statements] : cache_) {
      for (const auto& s : statements) {
        if (s.property.id == property_id) values.insert(render(s.object));
      }
    }
  }
  return {values.begin(), values.end()};
}

}  // namespace kgvqa
