#include "kgvqa/pipeline.hpp"

#include <fstream>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "kgvqa/dataset_io.hpp"
#include "kgvqa/errors.hpp"
#include "kgvqa/fixture_store.hpp"
#include "kgvqa/sparql_store.hpp"
#include "kgvqa/splitter.hpp"

namespace kgvqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const std::optional<fs::path>& path, std::string_view what) {
  if (path && !fs::is_regular_file(*path)) {
    throw ConfigError(fmt::format("{} '{}' does not exist", what, path->string()));
  }
}

template <typename F>
auto stage(std::string_view name, F&& body) {
  spdlog::info("stage {}: start", name);
  try {
    auto result = body();
    spdlog::info("stage {}: done", name);
    return result;
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(name), e.what());
  }
}

std::unique_ptr<KgBackend> make_backend(const RunConfig& config) {
  if (config.fixture) return std::make_unique<FixtureStore>(FixtureStore::load(*config.fixture, config.language));
  SparqlConfig sparql;
  sparql.endpoint = *config.endpoint;
  sparql.language = config.language;
  sparql.timeout = std::chrono::seconds(config.timeout_seconds);
  return std::make_unique<SparqlStore>(sparql);
}

fs::path out(const RunConfig& config, const char* name) { return config.output_dir / name; }

}  // namespace

void RunConfig::validate() const {
  if (!seed) throw ConfigError("a seed is required");
  if (fixture.has_value() == endpoint.has_value()) {
    throw ConfigError("exactly one of a fixture file or a SPARQL endpoint is required");
  }
  if (endpoint && endpoint->empty()) throw ConfigError("endpoint is empty");
  if (timeout_seconds <= 0) throw ConfigError("timeout must be positive");
  if (output_dir.empty()) throw ConfigError("an output directory is required");
  require_file(fixture, "fixture");
  if (!skip_generate) {
    if (!vg_objects && !gld_csv) throw ConfigError("generation needs VG objects or a GLDv2 CSV");
    if (vg_objects && !wordnet_index) throw ConfigError("VG objects need a WordNet index");
    require_file(vg_objects, "VG objects file");
    require_file(vg_relations, "VG relations file");
    require_file(gld_csv, "GLDv2 CSV");
    require_file(wordnet_index, "WordNet index");
    if (templates.empty()) throw ConfigError("a template bank is required");
    require_file(templates, "template bank");
  }
  generator.validate();
  balance.validate();
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
}

json GenerateSummary::to_json() const {
  json skipped = json::array();
  std::map<std::string, std::size_t> by_reason;
  for (const auto& s : skips) {
    skipped.push_back({{"image_id", s.image_id}, {"object_id", s.object_id}, {"reason", s.reason}});
    ++by_reason[s.reason];
  }
  return {{"images", images},   {"objects", objects},         {"questions", questions},
          {"skipped", skipped}, {"skip_reasons", by_reason}};
}

GenerateSummary run_generate(const RunConfig& config) {
  config.validate();
  return stage("generate", [&] {
    KgStore kg(make_backend(config));
    auto bank = TemplateBank::load(config.templates);
    WordNetIndex wordnet = config.wordnet_index ? WordNetIndex::load(*config.wordnet_index) : WordNetIndex{};
    ConceptLinker linker(wordnet, kg);

    std::vector<ObjectAnnotation> objects;
    if (config.vg_objects) objects = read_vg_objects(*config.vg_objects);
    if (config.gld_csv) {
      auto gld = read_gld_csv(*config.gld_csv);
      objects.insert(objects.end(), gld.begin(), gld.end());
    }
    std::vector<SceneRelation> relations;
    if (config.vg_relations) relations = read_scene_relations(*config.vg_relations);
    auto images = group_by_image(objects, relations);

    // Load every neighborhood before generating so the literal distractor
    // pools are the same no matter which image comes first.
    for (const auto& image : images) {
      for (const auto& object : image.objects) {
        try {
          if (auto entity = linker.link(object)) kg.neighborhood(*entity, config.generator.max_hops);
        } catch (const TransportError&) {
          throw;
        } catch (const Error&) {
          // reported as a skip during generation
        }
      }
    }

    GeneratorConfig gen = config.generator;
    gen.seed = *config.seed;
    QuestionGenerator generator(kg, bank, linker, gen);
    GenerateSummary summary;
    std::vector<QAItem> dataset;
    for (const auto& image : images) {
      auto result = generator.generate_for_image(image);
      summary.objects += image.objects.size();
      for (auto& item : result.items) dataset.push_back(std::move(item));
      for (auto& skip : result.skips) summary.skips.push_back(std::move(skip));
    }
    summary.images = images.size();
    summary.questions = dataset.size();
    fs::create_directories(config.output_dir);
    write_dataset(out(config, artifacts::kRaw), dataset);
    write_json(out(config, artifacts::kSkips), summary.to_json());
    spdlog::info("generated {} questions for {} images ({} skips)", summary.questions, summary.images,
                 summary.skips.size());
    return summary;
  });
}

BalanceReport run_balance(const RunConfig& config) {
  if (!config.seed) throw ConfigError("a seed is required");
  config.balance.validate();
  return stage("balance", [&] {
    auto raw = read_dataset(out(config, artifacts::kRaw));
    auto result = balance(raw, config.balance, *config.seed);
    write_dataset(out(config, artifacts::kBalanced), result.dataset);
    write_json(out(config, artifacts::kBalanceReport), result.report.to_json());
    spdlog::info("balanced {} -> {} questions", result.report.initial_questions, result.report.final_questions);
    return result.report;
  });
}

DatasetSplit run_split(const RunConfig& config) {
  if (!config.seed) throw ConfigError("a seed is required");
  if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
  return stage("split", [&] {
    auto balanced = read_dataset(out(config, artifacts::kBalanced));
    auto result = split(balanced, config.split_ratio, *config.seed);
    write_dataset(out(config, artifacts::kTrain), result.train);
    write_dataset(out(config, artifacts::kTest), result.test);
    write_json(out(config, artifacts::kSplitManifest), result.manifest_json());
    spdlog::info("split: {} train / {} test questions", result.train.size(), result.test.size());
    return result;
  });
}

json run_stats(const RunConfig& config) {
  return stage("stats", [&] {
    json doc = json::object();
    for (const char* name : {artifacts::kRaw, artifacts::kBalanced, artifacts::kTrain, artifacts::kTest}) {
      auto path = out(config, name);
      if (!fs::exists(path)) continue;
      auto dataset = read_dataset(path);
      std::string key = fs::path(name).stem().string();
      doc[key] = dataset.empty() ? json(nullptr) : compute_stats(dataset).to_json();
    }
    if (doc.empty()) throw InputError("no dataset artifacts to describe");
    write_json(out(config, artifacts::kStats), doc);
    return doc;
  });
}

void run_all(const RunConfig& config) {
  config.validate();
  if (!config.skip_generate) run_generate(config);
  if (!config.skip_balance) run_balance(config);
  if (!config.skip_split) run_split(config);
  if (!config.skip_stats) run_stats(config);
}

ScoreReport run_eval(const EvalRun& run) {
  run.config.validate();
  if (!fs::is_regular_file(run.dataset)) throw ConfigError(fmt::format("dataset '{}' does not exist", run.dataset.string()));
  if (!fs::is_regular_file(run.predictions)) {
    throw ConfigError(fmt::format("predictions '{}' do not exist", run.predictions.string()));
  }
  if (run.output_dir.empty()) throw ConfigError("an output directory is required");
  return stage("eval", [&] {
    auto dataset = read_dataset(run.dataset);
    auto predictions = read_predictions(run.predictions);
    auto provider = make_provider(run.provider);
    auto report = evaluate(dataset, predictions, run.config, provider.get());
    fs::create_directories(run.output_dir);
    write_json(run.output_dir / artifacts::kEvalJson, report.to_json());
    std::ofstream text(run.output_dir / artifacts::kEvalText, std::ios::binary);
    text << report.to_text();
    if (!text) throw InputError("cannot write evaluation table");
    return report;
  });
}

}  // namespace kgvqa
