#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgvqa/pipeline.hpp"
#include "kgvqa/qa_item.hpp"

namespace kgvqa::testing {

std::filesystem::path data_dir();
std::filesystem::path fixture_dir();
std::filesystem::path fixture_kg();
std::filesystem::path shipped_bank();

// Fresh, empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Settings of the shipped fixture config, with `out` as output directory.
RunConfig fixture_run_config(const std::filesystem::path& out, std::uint64_t seed = 7);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Every regular file below `root`, relative path -> contents.
std::map<std::string, std::string> read_tree(const std::filesystem::path& root);

// Runs the kgvqa CLI with `args`, stdout/stderr discarded unless given.
int run_cli(const std::string& args, const std::map<std::string, std::string>& env = {},
            std::string* captured_stderr = nullptr);

// Minimal QAItem for balancing/splitting/eval tests.
QAItem make_item(const std::string& question_id, const std::string& image_id, const std::string& group,
                 const std::string& answer, int hops = 1, bool scene = false, ImageSource source = ImageSource::kVG);

// L1 distance between the train and test distributions over (group, answer)
// keys, restricted to the top `answers` answers of the `groups` largest groups.
double pooled_answer_l1(std::span<const QAItem> train, std::span<const QAItem> test, std::size_t groups = 20,
                        std::size_t answers = 10);

}  // namespace kgvqa::testing
