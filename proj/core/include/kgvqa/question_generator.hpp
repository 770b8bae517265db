#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kgvqa/concept_linker.hpp"
#include "kgvqa/kg_store.hpp"
#include "kgvqa/qa_item.hpp"
#include "kgvqa/template_bank.hpp"

namespace kgvqa {

struct GeneratorConfig {
  int max_hops = 2;                            // 1..3
  int branch_cap = 4;                          // statements per (entity, property) considered
  double scene_graph_probability = 0.5;        // chance a relation replaces "this <class>"
  std::optional<std::set<DomainTag>> domain_filter;  // applied to the outermost property
  int distractors = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

// A template application that cannot produce a question (no template, no
// sub-clause). Not an error: generation moves on.
struct SkipSignal {
  std::string reason;
};

using Generated = std::variant<QAItem, SkipSignal>;

// Builds the question for a chain of statements starting at `main`:
//   clause_0 = clause0, clause_j = fill(sub_clause(step_j), clause_{j-1}),
//   question = fill(main(step_k), clause_{k-1}).
// Throws PathInvalidError when the chain is broken. The result has no
// image metadata and no choices.
Generated compose_question(const EntityId& main, std::span<const Statement> chain, const std::string& clause0,
                           const TemplateBank& bank);

Generated generate_one_hop(const EntityId& main, const Statement& statement, std::string_view class_name,
                           const TemplateBank& bank);

// Resolves `path` inside `subgraph` by taking, at each step, the first
// statement (in subgraph order) whose subject is the current entity.
Generated generate_multi_hop(const EntityId& main, const PropertyPath& path, const KnowledgeSubgraph& subgraph,
                             std::string_view class_name, const TemplateBank& bank);

// "the car parked next to the sidewalk". Throws InputError on an empty predicate.
std::string scene_graph_clause(const SceneRelation& relation, std::string_view class_name);

struct ImageInput {
  std::string image_id;
  ImageSource source = ImageSource::kVG;
  std::vector<ObjectAnnotation> objects;
  std::vector<SceneRelation> relations;
};

struct SkipRecord {
  std::string image_id;
  std::string object_id;
  std::string reason;
};

struct ImageQuestions {
  std::vector<QAItem> items;
  std::vector<SkipRecord> skips;
};

class QuestionGenerator {
 public:
  QuestionGenerator(KgStore& kg, const TemplateBank& bank, const ConceptLinker& linker, GeneratorConfig config);

  // Questions for every linkable object of one image, choices attached,
  // ordered by (object id, path). question_ids are "<image_id>-qNNNN".
  ImageQuestions generate_for_image(const ImageInput& image);

  // Every statement chain (length 1..max_hops) usable as a question about
  // `main`, in (path, objects) order.
  std::vector<std::vector<Statement>> enumerate_chains(const EntityId& main, const KnowledgeSubgraph& subgraph) const;

  const GeneratorConfig& config() const { return config_; }

 private:
  void attach_choices(QAItem& item, const std::string& property_id);

  KgStore& kg_;
  const TemplateBank& bank_;
  const ConceptLinker& linker_;
  GeneratorConfig config_;
};

// Groups annotations and relations into per-image inputs sorted by image id.
std::vector<ImageInput> group_by_image(std::span<const ObjectAnnotation> objects,
                                       std::span<const SceneRelation> relations);

}  // namespace kgvqa
