#include "support/test_util.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include <spdlog/spdlog.h>

namespace kgvqa::testing {

namespace fs = std::filesystem;

namespace {
// Expected warnings (unlabeled fixture entities, injected faults) would bury test output.
const bool quiet_logs = [] {
  spdlog::set_level(spdlog::level::err);
  return true;
}();
}  // namespace

fs::path data_dir() { return fs::path(KGVQA_DATA_DIR); }
fs::path fixture_dir() { return data_dir() / "fixture"; }
fs::path fixture_kg() { return fixture_dir() / "kg.json"; }
fs::path shipped_bank() { return data_dir() / "templates.tsv"; }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("kgvqa-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

RunConfig fixture_run_config(const fs::path& out, std::uint64_t seed) {
  RunConfig c;
  c.fixture = fixture_kg();
  c.vg_objects = fixture_dir() / "vg_objects.jsonl";
  c.vg_relations = fixture_dir() / "vg_relations.jsonl";
  c.gld_csv = fixture_dir() / "gld.csv";
  c.wordnet_index = fixture_dir() / "wordnet_index.tsv";
  c.templates = shipped_bank();
  c.generator.max_hops = 2;
  c.seed = seed;
  c.output_dir = out;
  return c;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), root).string()] = read_file(entry.path());
  }
  return files;
}

int run_cli(const std::string& args, const std::map<std::string, std::string>& env, std::string* captured_stderr) {
  std::string command = "env";
  for (const auto& [key, value] : env) command += " '" + key + "=" + value + "'";
  command += " '" + std::string(KGVQA_CLI_PATH) + "' " + args;
  std::string err_path;
  if (captured_stderr) {
    static std::atomic<int> counter{0};
    err_path = (fs::temp_directory_path() /
                ("kgvqa-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".err"))
                   .string();
    command += " >/dev/null 2>'" + err_path + "'";
  } else {
    command += " >/dev/null 2>&1";
  }
  int status = std::system(command.c_str());
  if (captured_stderr) {
    *captured_stderr = read_file(err_path);
    fs::remove(err_path);
  }
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

QAItem make_item(const std::string& question_id, const std::string& image_id, const std::string& group,
                 const std::string& answer, int hops, bool scene, ImageSource source) {
  QAItem item;
  item.question_id = question_id;
  item.image_id = image_id;
  item.source = source;
  item.main_object = EntityId("E0");
  for (int i = 1; i < hops; ++i) item.path.steps.push_back("step" + std::to_string(i));
  item.path.steps.push_back(group);
  item.hops = hops;
  item.uses_scene_graph = scene;
  item.question = "What is the " + group + " of this thing?";
  item.answer = Answer{Literal{answer}, answer};
  item.choices = {answer, "other 1", "other 2", "other 3"};
  item.gold_index = 0;
  item.domains = {DomainTag::parse("Places & Locations")};
  item.group_key = group;
  return item;
}

double pooled_answer_l1(std::span<const QAItem> train, std::span<const QAItem> test, std::size_t groups,
                        std::size_t answers) {
  using Key = std::pair<std::string, std::string>;
  std::map<std::string, std::size_t> group_size;
  std::map<Key, std::size_t> both, in_train, in_test;
  for (const auto* side : {&train, &test}) {
    for (const auto& q : *side) {
      ++group_size[q.group_key];
      ++both[{q.group_key, q.answer.text}];
      ++(side == &train ? in_train : in_test)[{q.group_key, q.answer.text}];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(group_size.begin(), group_size.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > groups) ranked.resize(groups);

  std::vector<Key> keys;
  for (const auto& [group, size] : ranked) {
    std::vector<std::pair<std::string, std::size_t>> top;
    for (const auto& [key, n] : both) {
      if (key.first == group) top.emplace_back(key.second, n);
    }
    std::stable_sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (top.size() > answers) top.resize(answers);
    for (const auto& [answer, n] : top) keys.emplace_back(group, answer);
  }

  auto total = [&](std::map<Key, std::size_t>& counts) {
    double t = 0;
    for (const auto& k : keys) t += static_cast<double>(counts[k]);
    return t;
  };
  double t_train = total(in_train), t_test = total(in_test);
  if (t_train == 0 || t_test == 0) return 2.0;
  double l1 = 0;
  for (const auto& k : keys) {
    l1 += std::abs(static_cast<double>(in_train[k]) / t_train - static_cast<double>(in_test[k]) / t_test);
  }
  return l1;
}

}  // namespace kgvqa::testing
