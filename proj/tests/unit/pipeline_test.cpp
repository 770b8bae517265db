#include <gtest/gtest.h>

#include "kgvqa/dataset_io.hpp"
#include "kgvqa/errors.hpp"
#include "kgvqa/pipeline.hpp"
#include "support/test_util.hpp"

namespace kgvqa {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string artifact(const TempDir& dir, const char* name) { return testing::read_file(dir / std::string(name)); }

TEST(Pipeline, WritesEveryArtifact) {
  TempDir dir("pipe-all");
  run_all(testing::fixture_run_config(dir.path()));
  for (const char* name : {artifacts::kRaw, artifacts::kSkips, artifacts::kBalanced, artifacts::kBalanceReport,
                           artifacts::kTrain, artifacts::kTest, artifacts::kSplitManifest, artifacts::kStats}) {
    EXPECT_TRUE(fs::is_regular_file(dir / std::string(name))) << name;
  }
  auto raw = read_dataset(dir / std::string(artifacts::kRaw));
  auto train = read_dataset(dir / std::string(artifacts::kTrain));
  auto test = read_dataset(dir / std::string(artifacts::kTest));
  auto balanced = read_dataset(dir / std::string(artifacts::kBalanced));
  EXPECT_EQ(train.size() + test.size(), balanced.size());
  EXPECT_LE(balanced.size(), raw.size());
}

TEST(Pipeline, FigureOneStrings) {
  TempDir dir("pipe-fig1");
  auto config = testing::fixture_run_config(dir.path());
  run_generate(config);
  auto raw = read_dataset(dir / std::string(artifacts::kRaw));
  std::map<std::string, std::set<std::string>> answers;
  for (const auto& q : raw) answers[q.question].insert(q.answer.text);
  EXPECT_EQ(answers["How high is this church?"], (std::set<std::string>{"72 metre"}));
  EXPECT_EQ(answers["What is the capital of the country where this church is located?"],
            (std::set<std::string>{"Stockholm"}));
}

TEST(Pipeline, GenerateReportCountsSkips) {
  TempDir dir("pipe-skips");
  auto summary = run_generate(testing::fixture_run_config(dir.path()));
  auto j = nlohmann::json::parse(artifact(dir, artifacts::kSkips));
  EXPECT_EQ(j["questions"], summary.questions);
  EXPECT_EQ(j["skipped"].size(), summary.skips.size());
  EXPECT_EQ(j["skip_reasons"]["not linked to any entity"], 11);
  EXPECT_EQ(j["skip_reasons"]["entity E85 has neither instance-of nor subclass-of"], 10);
  // the unknown landmark, every sidewalk and every zebra
  EXPECT_EQ(summary.skips.size(), 1u + 10u + 10u);
}

TEST(Pipeline, ZeroRoundsKeepsRawBytes) {
  TempDir dir("pipe-r0");
  auto config = testing::fixture_run_config(dir.path());
  config.balance.rounds = 0;
  config.skip_split = true;
  config.skip_stats = true;
  run_all(config);
  EXPECT_EQ(artifact(dir, artifacts::kRaw), artifact(dir, artifacts::kBalanced));
}

TEST(Pipeline, DeterministicOutputTree) {
  TempDir a("pipe-det-a"), b("pipe-det-b"), c("pipe-det-c");
  run_all(testing::fixture_run_config(a.path(), 7));
  run_all(testing::fixture_run_config(b.path(), 7));
  run_all(testing::fixture_run_config(c.path(), 8));
  auto ta = testing::read_tree(a.path());
  EXPECT_EQ(ta, testing::read_tree(b.path()));
  EXPECT_NE(ta, testing::read_tree(c.path()));
}

TEST(Pipeline, StatsRawDominatesBalanced) {
  TempDir dir("pipe-stats");
  auto config = testing::fixture_run_config(dir.path());
  config.balance.top_k = 2;  // forces removals on the fixture
  run_all(config);
  auto stats = nlohmann::json::parse(artifact(dir, artifacts::kStats));
  ASSERT_TRUE(stats.contains("raw"));
  ASSERT_TRUE(stats.contains("balanced"));
  EXPECT_GE(stats["raw"]["n_questions"], stats["balanced"]["n_questions"]);
  EXPECT_LT(stats["balanced"]["n_questions"], stats["raw"]["n_questions"]);
  for (std::size_t h = 0; h < 3; ++h) EXPECT_GE(stats["raw"]["n_per_hop"][h], stats["balanced"]["n_per_hop"][h]);
  EXPECT_EQ(stats["train"]["n_questions"].get<int>() + stats["test"]["n_questions"].get<int>(),
            stats["balanced"]["n_questions"].get<int>());
}

TEST(Pipeline, StagesResumeFromArtifacts) {
  TempDir dir("pipe-resume");
  auto config = testing::fixture_run_config(dir.path());
  run_generate(config);
  auto raw = artifact(dir, artifacts::kRaw);
  config.skip_generate = true;
  run_all(config);
  EXPECT_EQ(artifact(dir, artifacts::kRaw), raw);
  EXPECT_TRUE(fs::exists(dir / std::string(artifacts::kTrain)));
}

TEST(Pipeline, MissingInputOfLaterStageIsStageError) {
  TempDir dir("pipe-missing");
  auto config = testing::fixture_run_config(dir.path());
  EXPECT_THROW(run_balance(config), StageError);
  try {
    run_split(config);
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "split");
  }
}

TEST(RunConfig, Validation) {
  TempDir dir("pipe-cfg");
  auto good = testing::fixture_run_config(dir.path());
  EXPECT_NO_THROW(good.validate());

  auto c = good;
  c.seed.reset();
  EXPECT_THROW(c.validate(), ConfigError);
  c = good;
  c.endpoint = "https://query.wikidata.org/sparql";
  EXPECT_THROW(c.validate(), ConfigError);  // two backends
  c = good;
  c.fixture.reset();
  EXPECT_THROW(c.validate(), ConfigError);  // none
  c = good;
  c.vg_objects = dir / "absent.jsonl";
  EXPECT_THROW(c.validate(), ConfigError);
  c = good;
  c.wordnet_index.reset();
  EXPECT_THROW(c.validate(), ConfigError);
  c = good;
  c.split_ratio = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = good;
  c.generator.max_hops = 5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = good;
  c.balance.top_k = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(run_all(c), ConfigError);
}

TEST(Pipeline, CorruptFixtureIsStageError) {
  TempDir dir("pipe-bad");
  testing::write_file(dir / "kg.json", "{\"entities\": [");
  auto config = testing::fixture_run_config(dir / "out");
  config.fixture = dir / "kg.json";
  try {
    run_all(config);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "generate");
  }
}

TEST(Pipeline, EvalWritesReports) {
  TempDir dir("pipe-eval");
  auto config = testing::fixture_run_config(dir.path());
  run_all(config);
  auto test = read_dataset(dir / std::string(artifacts::kTest));
  std::string preds;
  for (std::size_t i = 0; i < test.size(); ++i) {
    nlohmann::json p = {{"question_id", test[i].question_id}};
    if (i % 2) {
      p["text"] = test[i].answer.text;
    } else {
      p["letter"] = std::string(1, char('A' + test[i].gold_index));
    }
    preds += p.dump() + "\n";
  }
  testing::write_file(dir / "preds.jsonl", preds);
  EvalRun run{dir / std::string(artifacts::kTest), dir / "preds.jsonl", dir / "eval", "stub", {}};
  auto report = run_eval(run);
  EXPECT_DOUBLE_EQ(report.metrics.at("exact").overall.mean, 100.0);
  EXPECT_DOUBLE_EQ(report.metrics.at("mc").overall.mean, 100.0);
  EXPECT_DOUBLE_EQ(report.metrics.at("semantic").overall.mean, 100.0);
  EXPECT_TRUE(fs::exists(dir / "eval" / artifacts::kEvalJson));
  EXPECT_TRUE(fs::exists(dir / "eval" / artifacts::kEvalText));
  auto j = nlohmann::json::parse(testing::read_file(dir / "eval" / artifacts::kEvalJson));
  EXPECT_EQ(j, report.to_json());
}

}  // namespace
}  // namespace kgvqa
