// kgvqa: generate, balance, split, describe and score the benchmark.
//
// Settings come from, in decreasing priority: command-line flags, the
// --config file (key = value lines, '#' comments), KGVQA_<KEY> environment
// variables, built-in defaults. Relative paths in the config file resolve
// against the file's directory.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kgvqa/dataset_io.hpp"
#include "kgvqa/errors.hpp"
#include "kgvqa/pipeline.hpp"
#include "kgvqa/text.hpp"

namespace fs = std::filesystem;
using namespace kgvqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

struct Key {
  const char* name;
  const char* help;
  bool is_path = false;
  bool is_flag = false;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> all = {
      {"fixture", "local knowledge-graph fixture (JSON)", true},
      {"endpoint", "SPARQL endpoint URL"},
      {"language", "label language"},
      {"timeout", "endpoint timeout in seconds"},
      {"vg_objects", "VG-style object annotations (JSON lines)", true},
      {"vg_relations", "VG-style scene relations (JSON lines)", true},
      {"gld_csv", "GLDv2-style landmark CSV", true},
      {"wordnet", "WordNet synset index (TSV)", true},
      {"templates", "template bank (TSV)", true},
      {"max_hops", "longest property chain (1-3)"},
      {"branch_cap", "statements followed per entity and property"},
      {"scene_graph_probability", "chance a scene relation names the object"},
      {"domains", "keep only these domains ('|' separated)"},
      {"distractors", "false choices per question"},
      {"rounds", "balancing rounds"},
      {"top_k", "answers kept per property before balancing"},
      {"ratio_max", "neighbouring-frequency ratio targeted by balancing"},
      {"head_tail_target", "head/tail ratio below which answers are left alone"},
      {"split_ratio", "fraction of images per category put in train"},
      {"seed", "random seed (required)"},
      {"out", "output directory", true},
      {"skip_generate", "reuse raw.jsonl", false, true},
      {"skip_balance", "reuse balanced.jsonl", false, true},
      {"skip_split", "skip the train/test split", false, true},
      {"skip_stats", "skip stats.json", false, true},
      {"dataset", "dataset to describe or score (JSON lines)", true},
      {"predictions", "model predictions (JSON lines)", true},
      {"provider", "embedding provider: stub | sidecar:HOST:PORT | sidecar-exec:COMMAND"},
      {"threshold", "similarity threshold for the semantic metric"},
      {"metrics", "metrics to compute (',' separated)"},
  };
  return all;
}

std::string flag_name(std::string_view key) {
  std::string flag = "--" + std::string(key);
  for (auto& c : flag) {
    if (c == '_') c = '-';
  }
  return flag;
}

std::string env_name(std::string_view key) {
  std::string env = "KGVQA_";
  for (char c : key) env.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return env;
}

class Settings {
 public:
  void add_to(CLI::App& app) {
    for (const auto& key : keys()) {
      if (key.is_flag) {
        app.add_flag(flag_name(key.name), flags_[key.name], key.help);
      } else {
        app.add_option(flag_name(key.name), cli_[key.name], key.help);
      }
    }
  }

  void load_file(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw ConfigError(fmt::format("config file '{}' does not exist", path.string()));
    std::vector<CLI::ConfigItem> items;
    try {
      items = CLI::ConfigBase().from_file(path.string());
    } catch (const CLI::Error& e) {
      throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    std::map<std::string, const Key*> known;
    for (const auto& key : keys()) known.emplace(key.name, &key);
    for (const auto& item : items) {
      if (item.name == "++" || item.name == "--") continue;  // section markers
      std::string name = item.name;
      for (auto& c : name) {
        if (c == '-') c = '_';
      }
      auto it = known.find(name);
      if (it == known.end()) throw ConfigError(fmt::format("{}: unknown key '{}'", path.string(), item.name));
      std::string value = join(item.inputs, ",");
      if (it->second->is_path && !value.empty() && fs::path(value).is_relative()) {
        value = (path.parent_path() / value).lexically_normal().string();
      }
      file_[name] = value;
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    if (auto it = cli_.find(key); it != cli_.end() && !it->second.empty()) return it->second;
    if (auto it = flags_.find(key); it != flags_.end() && it->second) return "true";
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    if (const char* env = std::getenv(env_name(key).c_str()); env && *env) return std::string(env);
    return std::nullopt;
  }

 private:
  std::map<std::string, std::string> cli_;
  std::map<std::string, bool> flags_;
  std::map<std::string, std::string> file_;
};

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
      value = static_cast<T>(std::stod(text, &used));
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
      value = static_cast<T>(std::stoull(text, &used));
    } else {
      value = static_cast<T>(std::stoll(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, text));
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  auto v = utf8_lower(trim(text));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

template <typename T>
void set_number(const Settings& s, const std::string& key, T& target) {
  if (auto v = s.get(key)) target = parse_number<T>(key, *v);
}

void set_path(const Settings& s, const std::string& key, std::optional<fs::path>& target) {
  if (auto v = s.get(key)) target = fs::path(*v);
}

RunConfig run_config(const Settings& s) {
  RunConfig c;
  set_path(s, "fixture", c.fixture);
  if (auto v = s.get("endpoint")) c.endpoint = *v;
  if (auto v = s.get("language")) c.language = *v;
  set_number(s, "timeout", c.timeout_seconds);
  set_path(s, "vg_objects", c.vg_objects);
  set_path(s, "vg_relations", c.vg_relations);
  set_path(s, "gld_csv", c.gld_csv);
  set_path(s, "wordnet", c.wordnet_index);
  if (auto v = s.get("templates")) c.templates = *v;
  set_number(s, "max_hops", c.generator.max_hops);
  set_number(s, "branch_cap", c.generator.branch_cap);
  set_number(s, "scene_graph_probability", c.generator.scene_graph_probability);
  if (auto v = s.get("domains")) {
    std::set<DomainTag> tags;
    try {
      for (const auto& name : split(*v, '|')) {
        if (!trim(name).empty()) tags.insert(DomainTag::parse(trim(name)));
      }
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    c.generator.domain_filter = tags;
  }
  set_number(s, "distractors", c.generator.distractors);
  set_number(s, "rounds", c.balance.rounds);
  set_number(s, "top_k", c.balance.top_k);
  set_number(s, "ratio_max", c.balance.ratio_max);
  set_number(s, "head_tail_target", c.balance.head_tail_target);
  set_number(s, "split_ratio", c.split_ratio);
  if (auto v = s.get("seed")) c.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = s.get("out")) c.output_dir = *v;
  for (auto [key, flag] : {std::pair{"skip_generate", &c.skip_generate}, std::pair{"skip_balance", &c.skip_balance},
                           std::pair{"skip_split", &c.skip_split}, std::pair{"skip_stats", &c.skip_stats}}) {
    if (auto v = s.get(key)) *flag = parse_bool(key, *v);
  }
  return c;
}

void require_seed_and_out(const RunConfig& c) {
  if (!c.seed) throw ConfigError("a seed is required (--seed, config 'seed' or KGVQA_SEED)");
  if (c.output_dir.empty()) throw ConfigError("an output directory is required (--out)");
}

EvalRun eval_run(const Settings& s) {
  EvalRun run;
  auto dataset = s.get("dataset");
  auto predictions = s.get("predictions");
  auto out = s.get("out");
  if (!dataset || !predictions || !out) throw ConfigError("eval needs --dataset, --predictions and --out");
  run.dataset = *dataset;
  run.predictions = *predictions;
  run.output_dir = *out;
  if (auto v = s.get("provider")) run.provider = *v;
  set_number(s, "threshold", run.config.threshold);
  if (auto v = s.get("metrics")) {
    run.config.metrics.clear();
    for (const auto& m : split(*v, ',')) {
      if (!trim(m).empty()) run.config.metrics.insert(std::string(trim(m)));
    }
  }
  return run;
}

int describe(const Settings& s) {
  auto c = run_config(s);
  if (auto dataset = s.get("dataset")) {
    if (c.output_dir.empty()) throw ConfigError("an output directory is required (--out)");
    nlohmann::json doc;
    try {
      auto items = read_dataset(*dataset);
      doc[fs::path(*dataset).stem().string()] = compute_stats(items).to_json();
    } catch (const Error& e) {
      throw StageError("stats", e.what());
    }
    fs::create_directories(c.output_dir);
    write_json(c.output_dir / artifacts::kStats, doc);
    return kExitOk;
  }
  if (c.output_dir.empty()) throw ConfigError("an output directory is required (--out)");
  run_stats(c);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("kgvqa"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Knowledge-graph multi-hop VQA benchmark builder"};
  app.require_subcommand(1);
  std::string config_path;
  bool verbose = false;

  Settings settings;
  std::map<std::string, CLI::App*> commands;
  for (auto [name, help] : {std::pair{"generate", "generate raw.jsonl from annotations and the knowledge graph"},
                            std::pair{"balance", "balance raw.jsonl into balanced.jsonl"},
                            std::pair{"split", "split balanced.jsonl into train.jsonl and test.jsonl"},
                            std::pair{"stats", "write stats.json for --dataset or the output directory"},
                            std::pair{"eval", "score predictions against a dataset"},
                            std::pair{"run", "all stages in order"}}) {
    commands[name] = app.add_subcommand(name, help);
  }
  // Every subcommand accepts every setting so one config file serves all.
  for (auto& [name, cmd] : commands) {
    cmd->add_option("--config", config_path, "settings file (key = value)");
    cmd->add_flag("-v,--verbose", verbose, "debug logging");
    settings.add_to(*cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (!config_path.empty()) settings.load_file(config_path);
    if (commands["generate"]->parsed()) {
      auto c = run_config(settings);
      run_generate(c);
    } else if (commands["balance"]->parsed()) {
      auto c = run_config(settings);
      require_seed_and_out(c);
      run_balance(c);
    } else if (commands["split"]->parsed()) {
      auto c = run_config(settings);
      require_seed_and_out(c);
      run_split(c);
    } else if (commands["stats"]->parsed()) {
      return describe(settings);
    } else if (commands["eval"]->parsed()) {
      auto report = run_eval(eval_run(settings));
      std::cerr << report.to_text();
    } else {
      run_all(run_config(settings));
    }
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kExitConfig;
  } catch (const StageError& e) {
    spdlog::error("{}", e.what());
    return kExitStage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitStage;
  }
  return kExitOk;
}
