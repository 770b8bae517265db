#include "kgvqa/sparql_store.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "kgvqa/errors.hpp"

namespace kgvqa {

namespace {

using nlohmann::json;

constexpr std::string_view kEntityPrefix = "http://www.wikidata.org/entity/";
constexpr std::string_view kUnitOne = "http://www.wikidata.org/entity/Q199";

std::string escape_literal(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::optional<std::string> binding(const json& row, const char* var) {
  auto it = row.find(var);
  if (it == row.end()) return std::nullopt;
  return it->at("value").get<std::string>();
}

std::optional<std::string> local_entity_id(std::string_view uri) {
  if (!uri.starts_with(kEntityPrefix)) return std::nullopt;
  auto id = uri.substr(kEntityPrefix.size());
  if (id.empty()) return std::nullopt;
  return std::string(id);
}

// "+1889-03-31T00:00:00Z" with a Wikibase precision code (9 year, 10 month,
// 11 day; coarser codes collapse to year).
Date parse_wikibase_time(std::string_view time, int precision_code) {
  bool negative = !time.empty() && time.front() == '-';
  if (!time.empty() && (time.front() == '+' || time.front() == '-')) time.remove_prefix(1);
  auto t = time.find('T');
  auto date_part = std::string(time.substr(0, t));
  if (negative) date_part.insert(0, "-");
  auto precision = precision_code >= 11 ? DatePrecision::kDay
                   : precision_code == 10 ? DatePrecision::kMonth
                                          : DatePrecision::kYear;
  return Date::parse(date_part, precision);
}

}  // namespace

SparqlStore::SparqlStore(SparqlConfig config) : config_(std::move(config)) {
  auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError(fmt::format("endpoint '{}' lacks a scheme", config_.endpoint));
  }
  auto path_start = config_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
  if (config_.retries < 0) throw InputError("retry count must be non-negative");
}

std::string SparqlStore::synset_query(std::string_view synset_id) {
  return fmt::format("SELECT ?item WHERE {{ ?item wdt:P8814 \"{}\" . }} LIMIT 2", escape_literal(synset_id));
}

std::string SparqlStore::commons_query(std::string_view name) {
  return fmt::format("SELECT ?item WHERE {{ ?item wdt:P373 \"{}\" . }} LIMIT 2", escape_literal(name));
}

std::string SparqlStore::statements_query(const EntityId& entity, std::string_view language) {
  return fmt::format(
      "SELECT ?prop ?propLabel ?value ?valueLabel ?amount ?unit ?unitLabel ?time ?precision WHERE {{\n"
      "  wd:{0} ?p ?st .\n"
      "  ?prop wikibase:claim ?p ; wikibase:statementProperty ?ps ; wikibase:statementValue ?psv .\n"
      "  ?st ?ps ?value .\n"
      "  OPTIONAL {{ ?st ?psv ?q . ?q wikibase:quantityAmount ?amount . OPTIONAL {{ ?q wikibase:quantityUnit ?unit }} }}\n"
      "  OPTIONAL {{ ?st ?psv ?t . ?t wikibase:timeValue ?time ; wikibase:timePrecision ?precision }}\n"
      "  SERVICE wikibase:label {{ bd:serviceParam wikibase:language \"{1}\" . }}\n"
      "}}",
      entity.str(), escape_literal(language));
}

std::vector<EntityId> SparqlStore::parse_items(const json& results) {
  std::vector<EntityId> items;
  for (const auto& row : results.at("results").at("bindings")) {
    if (auto uri = binding(row, "item")) {
      if (auto id = local_entity_id(*uri)) items.emplace_back(*id);
    }
  }
  return items;
}

std::vector<Statement> SparqlStore::parse_statements(const EntityId& subject, const json& results) {
  std::vector<Statement> out;
  for (const auto& row : results.at("results").at("bindings")) {
    auto prop_uri = binding(row, "prop");
    auto prop_label = binding(row, "propLabel");
    auto value = row.find("value");
    if (!prop_uri || !prop_label || value == row.end()) continue;
    auto prop_id = local_entity_id(*prop_uri);
    if (!prop_id || *prop_label == *prop_id) continue;  // label service echoes the id when no label exists
    PropertyId property{*prop_id, *prop_label};

    auto type = value->at("type").get<std::string>();
    auto raw = value->at("value").get<std::string>();
    if (auto amount = binding(row, "amount")) {
      auto unit_uri = binding(row, "unit");
      std::string unit;
      if (unit_uri && *unit_uri != kUnitOne) unit = binding(row, "unitLabel").value_or("");
      out.push_back(Statement{subject, property, Quantity{std::stod(*amount), unit}});
    } else if (auto time = binding(row, "time")) {
      int code = std::stoi(binding(row, "precision").value_or("9"));
      try {
        out.push_back(Statement{subject, property, parse_wikibase_time(*time, code)});
      } catch (const InputError& e) {
        spdlog::warn("{} {}: unusable date '{}': {}", subject.str(), property.label, *time, e.what());
      }
    } else if (type == "uri") {
      auto id = local_entity_id(raw);
      if (!id) continue;
      auto label = binding(row, "valueLabel").value_or(*id);
      if (label == *id) {
        spdlog::warn("{} {}: object {} has no label in the query language; skipped", subject.str(),
                     property.label, *id);
        continue;
      }
      out.push_back(Statement{subject, property, EntityRef{EntityId(*id), label}});
    } else if (type == "literal" || type == "typed-literal") {
      out.push_back(Statement{subject, property, Literal{raw}});
    }
  }
  return out;
}

json SparqlStore::query(const std::string& sparql) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_follow_location(true);
  httplib::Headers headers{{"Accept", "application/sparql-results+json"}, {"User-Agent", config_.user_agent}};
  httplib::Params params{{"query", sparql}, {"format", "json"}};

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 << attempt));
    auto res = client.Get(path_, params, headers);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      json doc;
      try {
        doc = json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw TransportError(fmt::format("{}: unparsable SPARQL response: {}", config_.endpoint, e.what()));
      }
      if (!doc.is_object() || !doc.contains("results") || !doc["results"].contains("bindings") ||
          !doc["results"]["bindings"].is_array()) {
        throw TransportError(fmt::format("{}: response is not a SPARQL results document", config_.endpoint));
      }
      return doc;
    }
    last_error = fmt::format("HTTP {}", res->status);
    if (res->status != 429 && res->status < 500) break;  // client errors do not improve on retry
  }
  throw TransportError(fmt::format("{}: {}", config_.endpoint, last_error));
}

std::optional<EntityId> SparqlStore::single_item(const std::string& sparql, std::string_view what) {
  auto items = parse_items(query(sparql));
  if (items.empty()) return std::nullopt;
  std::sort(items.begin(), items.end());
  if (items.size() > 1) spdlog::warn("{} matches several entities; using {}", what, items.front().str());
  return items.front();
}

std::optional<EntityId> SparqlStore::find_by_synset(std::string_view synset_id) {
  return single_item(synset_query(synset_id), fmt::format("synset {}", synset_id));
}

std::optional<EntityId> SparqlStore::find_by_commons_name(std::string_view name) {
  return single_item(commons_query(name), fmt::format("commons name '{}'", name));
}

std::vector<Statement> SparqlStore::fetch_statements(const EntityId& entity) {
  auto results = query(statements_query(entity, config_.language));
  auto statements = parse_statements(entity, results);
  if (statements.empty() && results.at("results").at("bindings").empty()) {
    throw NotFoundError(fmt::format("entity {} has no statements at {}", entity.str(), config_.endpoint));
  }
  return statements;
}

}  // namespace kgvqa
