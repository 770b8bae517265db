#include "kgvqa/question_generator.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "kgvqa/choice_generator.hpp"
#include "kgvqa/errors.hpp"
#include "kgvqa/rng.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

void GeneratorConfig::validate() const {
  if (max_hops < 1 || max_hops > 3) throw ConfigError(fmt::format("max_hops {} outside 1..3", max_hops));
  if (branch_cap < 1) throw ConfigError("branch_cap must be >= 1");
  if (scene_graph_probability < 0 || scene_graph_probability > 1) {
    throw ConfigError("scene_graph_probability must be within [0, 1]");
  }
  if (distractors < 1) throw ConfigError("distractor count must be >= 1");
}

Generated compose_question(const EntityId& main, std::span<const Statement> chain, const std::string& clause0,
                           const TemplateBank& bank) {
  if (chain.empty() || chain.size() > 3) {
    throw InputError(fmt::format("path length {} outside 1..3", chain.size()));
  }
  EntityId current = main;
  std::string clause = clause0;
  PropertyPath path;
  for (std::size_t j = 0; j < chain.size(); ++j) {
    const auto& step = chain[j];
    if (step.subject != current) {
      throw PathInvalidError(fmt::format("step {} ({}) starts at {} but the chain is at {}", j,
                                         step.property.label, step.subject.str(), current.str()));
    }
    const auto* tmpl = bank.find(step.property.label);
    if (!tmpl) return SkipSignal{fmt::format("no template for '{}'", step.property.label)};
    path.steps.push_back(step.property.label);
    bool last = j + 1 == chain.size();
    if (last) break;
    const auto* next = as_entity(step.object);
    if (!next) {
      throw PathInvalidError(fmt::format("step {} ({}) ends in a literal; cannot continue", j, step.property.label));
    }
    if (!tmpl->sub_clause_text) return SkipSignal{fmt::format("'{}' has no sub-clause", step.property.label)};
    clause = fill(*tmpl->sub_clause_text, clause);
    current = next->id;
  }

  const auto& final_step = chain.back();
  const auto& outer = bank.at(final_step.property.label);
  QAItem item;
  item.main_object = main;
  item.path = std::move(path);
  item.hops = static_cast<int>(chain.size());
  item.question = fill(outer.main_text, clause);
  item.answer = Answer::from(final_step.object);
  item.answer_category = categorize(outer, item.answer);
  item.domains = outer.domains;
  item.group_key = final_step.property.label;
  return item;
}

Generated generate_one_hop(const EntityId& main, const Statement& statement, std::string_view class_name,
                           const TemplateBank& bank) {
  if (statement.subject != main) {
    throw InputError(fmt::format("statement subject {} is not the main object {}", statement.subject.str(), main.str()));
  }
  if (class_name.empty()) return SkipSignal{"missing class name"};
  return compose_question(main, std::span(&statement, 1), "this " + std::string(class_name), bank);
}

Generated generate_multi_hop(const EntityId& main, const PropertyPath& path, const KnowledgeSubgraph& subgraph,
                             std::string_view class_name, const TemplateBank& bank) {
  if (path.steps.empty() || path.steps.size() > 3) {
    throw InputError(fmt::format("path length {} outside 1..3", path.steps.size()));
  }
  if (class_name.empty()) return SkipSignal{"missing class name"};
  std::vector<Statement> chain;
  EntityId current = main;
  for (std::size_t j = 0; j < path.steps.size(); ++j) {
    auto it = std::find_if(subgraph.statements.begin(), subgraph.statements.end(), [&](const Statement& s) {
      return s.subject == current && s.property.label == path.steps[j];
    });
    if (it == subgraph.statements.end()) {
      throw PathInvalidError(fmt::format("no '{}' statement for {} in the subgraph", path.steps[j], current.str()));
    }
    chain.push_back(*it);
    if (j + 1 < path.steps.size()) {
      const auto* next = as_entity(it->object);
      if (!next) {
        throw PathInvalidError(fmt::format("'{}' of {} is a literal; the path cannot continue", path.steps[j],
                                           current.str()));
      }
      current = next->id;
    }
  }
  return compose_question(main, chain, "this " + std::string(class_name), bank);
}

std::string scene_graph_clause(const SceneRelation& relation, std::string_view class_name) {
  if (trim(relation.predicate).empty()) throw InputError("scene relation has an empty predicate");
  if (trim(relation.object_label).empty()) throw InputError("scene relation has an empty object label");
  return fmt::format("the {} {} the {}", class_name, trim(relation.predicate), trim(relation.object_label));
}

QuestionGenerator::QuestionGenerator(KgStore& kg, const TemplateBank& bank, const ConceptLinker& linker,
                                     GeneratorConfig config)
    : kg_(kg), bank_(bank), linker_(linker), config_(std::move(config)) {
  config_.validate();
}

std::vector<std::vector<Statement>> QuestionGenerator::enumerate_chains(const EntityId& main,
                                                                         const KnowledgeSubgraph& subgraph) const {
  std::map<EntityId, std::vector<const Statement*>> by_subject;
  for (const auto& s : subgraph.statements) by_subject[s.subject].push_back(&s);

  std::vector<std::vector<Statement>> chains;
  std::vector<Statement> chain;
  std::vector<EntityId> visited{main};

  auto walk = [&](auto&& self, const EntityId& entity) -> void {
    auto it = by_subject.find(entity);
    if (it == by_subject.end()) return;
    std::map<std::string, int> taken;  // per property id, for the branching cap
    for (const Statement* s : it->second) {
      if (taken[s->property.id]++ >= config_.branch_cap) continue;
      const auto* tmpl = bank_.find(s->property.label);
      if (!tmpl) continue;
      const auto* next = as_entity(s->object);
      // Cycles back onto the chain make degenerate questions ("... of this church" about the church).
      if (next && std::find(visited.begin(), visited.end(), next->id) != visited.end()) continue;
      chain.push_back(*s);
      chains.push_back(chain);
      if (next && tmpl->sub_clause_text && static_cast<int>(chain.size()) < config_.max_hops) {
        visited.push_back(next->id);
        self(self, next->id);
        visited.pop_back();
      }
      chain.pop_back();
    }
  };
  walk(walk, main);

  auto labels = [](const std::vector<Statement>& c) {
    std::vector<std::string> out;
    for (const auto& s : c) out.push_back(s.property.label);
    return out;
  };
  std::stable_sort(chains.begin(), chains.end(), [&](const auto& a, const auto& b) {
    auto la = labels(a), lb = labels(b);
    if (la != lb) return la < lb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Statement& x, const Statement& y) { return x.object < y.object; });
  });
  return chains;
}

void QuestionGenerator::attach_choices(QAItem& item, const std::string& property_id) {
  auto rng = substream(config_.seed, "choices|" + item.question_id);
  const auto& outer = bank_.at(item.group_key);
  std::vector<std::string> literal_pool;
  if (item.answer_category == AnswerCategory::kLiteral) literal_pool = kg_.property_values(property_id);
  DistractorContext context{outer.fixed_choice_pool, literal_pool};
  auto distractors = gen_false_choices(item.answer, item.answer_category, context, config_.distractors, rng);
  auto shuffled = shuffle_choices(item.answer.text, distractors.values, rng);
  item.choices = std::move(shuffled.choices);
  item.gold_index = shuffled.gold_index;
  item.degenerate_range = distractors.degenerate_range;
}

ImageQuestions QuestionGenerator::generate_for_image(const ImageInput& image) {
  ImageQuestions out;
  auto objects = image.objects;
  std::stable_sort(objects.begin(), objects.end(),
                   [](const ObjectAnnotation& a, const ObjectAnnotation& b) { return a.object_id < b.object_id; });

  struct Pending {
    QAItem item;
    std::string property_id;
  };
  std::vector<Pending> pending;
  std::set<std::pair<std::string, std::string>> seen;  // (question, answer) within this image

  for (const auto& object : objects) {
    auto skip = [&](std::string reason) {
      out.skips.push_back(SkipRecord{image.image_id, object.object_id, std::move(reason)});
    };
    std::optional<EntityId> entity;
    std::string class_name;
    KnowledgeSubgraph subgraph;
    try {
      entity = linker_.link(object);
      if (!entity) {
        skip("not linked to any entity");
        continue;
      }
      class_name = kg_.class_name_of(*entity);
      subgraph = kg_.neighborhood(*entity, config_.max_hops);
    } catch (const TransportError&) {
      throw;
    } catch (const Error& e) {
      skip(e.what());
      continue;
    }

    std::optional<SceneRelation> relation;
    for (const auto& r : image.relations) {
      if (r.subject_object_id == object.object_id && !trim(r.predicate).empty() && !trim(r.object_label).empty()) {
        relation = r;  // first in annotation order
        break;
      }
    }

    std::size_t emitted = 0;
    for (const auto& chain : enumerate_chains(*entity, subgraph)) {
      const auto& outer = bank_.at(chain.back().property.label);
      if (config_.domain_filter) {
        bool admitted = std::any_of(outer.domains.begin(), outer.domains.end(),
                                    [&](const DomainTag& d) { return config_.domain_filter->contains(d); });
        if (!admitted) continue;
      }

      std::string chain_key = fmt::format("{}|{}", image.image_id, object.object_id);
      for (const auto& s : chain) chain_key += "|" + s.property.id + ">" + render(s.object);

      std::string clause0 = "this " + class_name;
      bool scene = false;
      if (relation && config_.scene_graph_probability > 0) {
        auto coin = substream(config_.seed, "scene|" + chain_key);
        if (std::bernoulli_distribution(config_.scene_graph_probability)(coin)) {
          clause0 = scene_graph_clause(*relation, class_name);
          scene = true;
        }
      }

      auto result = compose_question(*entity, chain, clause0, bank_);
      auto* item = std::get_if<QAItem>(&result);
      if (!item) continue;
      if (!seen.emplace(item->question, item->answer.text).second) continue;
      item->image_id = image.image_id;
      item->source = image.source;
      item->uses_scene_graph = scene;
      pending.push_back(Pending{std::move(*item), chain.back().property.id});
      ++emitted;
    }
    if (emitted == 0) skip("no question could be generated");
  }

  for (std::size_t i = 0; i < pending.size(); ++i) {
    auto& [item, property_id] = pending[i];
    item.question_id = fmt::format("{}-q{:04}", image.image_id, i);
    attach_choices(item, property_id);
    out.items.push_back(std::move(item));
  }
  return out;
}

std::vector<ImageInput> group_by_image(std::span<const ObjectAnnotation> objects,
                                       std::span<const SceneRelation> relations) {
  std::map<std::string, ImageInput> images;
  for (const auto& o : objects) {
    auto& image = images[o.image_id];
    if (image.objects.empty()) {
      image.image_id = o.image_id;
      image.source = o.source;
    } else if (image.source != o.source) {
      throw ValidationError(fmt::format("image {} appears under both VG and GLDv2", o.image_id));
    }
    image.objects.push_back(o);
  }
  for (const auto& r : relations) {
    if (auto it = images.find(r.image_id); it != images.end()) it->second.relations.push_back(r);
  }
  std::vector<ImageInput> out;
  out.reserve(images.size());
  for (auto& [id, image] : images) out.push_back(std::move(image));
  return out;
}

}  // namespace kgvqa
