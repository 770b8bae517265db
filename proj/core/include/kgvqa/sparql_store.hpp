#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

#include "kgvqa/kg_store.hpp"

namespace kgvqa {

struct SparqlConfig {
  std::string endpoint = "https://query.wikidata.org/sparql";
  std::string language = "en";
  std::chrono::seconds timeout{30};
  int retries = 2;
  std::string user_agent = "kgvqa/0.1 (benchmark construction)";
};

// Wikidata-flavoured SPARQL-over-HTTP backend. Results are read from the
// standard SPARQL 1.1 JSON results serialization.
class SparqlStore : public KgBackend {
 public:
  explicit SparqlStore(SparqlConfig config);

  std::optional<EntityId> find_by_synset(std::string_view synset_id) override;
  std::optional<EntityId> find_by_commons_name(std::string_view name) override;
  std::vector<Statement> fetch_statements(const EntityId& entity) override;

  // Query text and result decoding are exposed for offline testing.
  static std::string synset_query(std::string_view synset_id);
  static std::string commons_query(std::string_view name);
  static std::string statements_query(const EntityId& entity, std::string_view language);
  static std::vector<EntityId> parse_items(const nlohmann::json& results);
  static std::vector<Statement> parse_statements(const EntityId& subject, const nlohmann::json& results);

 private:
  nlohmann::json query(const std::string& sparql);
  std::optional<EntityId> single_item(const std::string& sparql, std::string_view what);

  SparqlConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

}  // namespace kgvqa
