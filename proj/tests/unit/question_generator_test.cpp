#include <gtest/gtest.h>

#include <algorithm>

#include "kgvqa/errors.hpp"
#include "kgvqa/fixture_store.hpp"
#include "kgvqa/question_generator.hpp"
#include "support/test_util.hpp"

namespace kgvqa {
namespace {

constexpr const char* kChurchUrl = "https://commons.wikimedia.org/wiki/Category:Maria_Magdalena_kyrka,_Stockholm";
constexpr const char* kTowersUrl = "https://commons.wikimedia.org/wiki/Category:Petronas_Towers";

class GeneratorTest : public ::testing::Test {
 protected:
  GeneratorTest()
      : bank_(TemplateBank::load(testing::shipped_bank())),
        index_(WordNetIndex::load(testing::fixture_dir() / "wordnet_index.tsv")),
        kg_(std::make_unique<FixtureStore>(FixtureStore::load(testing::fixture_kg()))),
        linker_(index_, kg_) {}

  static ImageInput landmark(const std::string& image_id, const std::string& url) {
    ObjectAnnotation a;
    a.image_id = image_id;
    a.object_id = "0";
    a.wikimedia_url = url;
    a.source = ImageSource::kGLDv2;
    return ImageInput{image_id, ImageSource::kGLDv2, {a}, {}};
  }

  static ImageInput street() {
    ObjectAnnotation car;
    car.image_id = "1001";
    car.object_id = "2";
    car.synset_name = "car.n.01";
    ObjectAnnotation sidewalk = car;
    sidewalk.object_id = "3";
    sidewalk.synset_name = "sidewalk.n.01";
    return ImageInput{"1001", ImageSource::kVG, {sidewalk, car}, {SceneRelation{"1001", "2", "parked next to", "sidewalk"}}};
  }

  ImageQuestions run(const ImageInput& image, GeneratorConfig config = {}) {
    QuestionGenerator gen(kg_, bank_, linker_, config);
    return gen.generate_for_image(image);
  }

  static std::vector<std::string> questions(const ImageQuestions& q) {
    std::vector<std::string> out;
    for (const auto& item : q.items) out.push_back(item.question);
    return out;
  }

  static const QAItem* find(const ImageQuestions& q, const std::string& question) {
    for (const auto& item : q.items) {
      if (item.question == question) return &item;
    }
    return nullptr;
  }

  TemplateBank bank_;
  WordNetIndex index_;
  KgStore kg_;
  ConceptLinker linker_;
};

TEST_F(GeneratorTest, OneHopSkyscraperArchitect) {
  auto st = kg_.statements_of(EntityId("E3"), std::set<std::string>{"P84"});
  auto result = generate_one_hop(EntityId("E3"), st.at(0), "skyscraper", bank_);
  const auto* item = std::get_if<QAItem>(&result);
  ASSERT_NE(item, nullptr);
  EXPECT_EQ(item->question, "Who designed this skyscraper?");
  EXPECT_EQ(item->answer.text, "César Pelli");
  EXPECT_EQ(item->hops, 1);
  EXPECT_EQ(item->group_key, "architect");
}

TEST_F(GeneratorTest, OneHopChurchHeight) {
  auto st = kg_.statements_of(EntityId("E2"), std::set<std::string>{"P2048"});
  auto result = generate_one_hop(EntityId("E2"), st.at(0), "church", bank_);
  const auto* item = std::get_if<QAItem>(&result);
  ASSERT_NE(item, nullptr);
  EXPECT_EQ(item->question, "How high is this church?");
  EXPECT_EQ(item->answer.text, "72 metre");
  EXPECT_EQ(item->answer_category, AnswerCategory::kNumber);
}

TEST_F(GeneratorTest, MissingTemplateOrClassIsSkip) {
  Statement unknown{EntityId("E2"), PropertyId{"P9", "favourite colour"}, Literal{"red"}};
  EXPECT_TRUE(std::holds_alternative<SkipSignal>(generate_one_hop(EntityId("E2"), unknown, "church", bank_)));
  auto st = kg_.statements_of(EntityId("E2"), std::set<std::string>{"P2048"});
  EXPECT_TRUE(std::holds_alternative<SkipSignal>(generate_one_hop(EntityId("E2"), st.at(0), "", bank_)));
}

TEST_F(GeneratorTest, MultiHopCapitalOfCountry) {
  auto sub = kg_.neighborhood(EntityId("E2"), 2);
  auto result = generate_multi_hop(EntityId("E2"), PropertyPath{{"country", "capital"}}, sub, "church", bank_);
  const auto* item = std::get_if<QAItem>(&result);
  ASSERT_NE(item, nullptr);
  EXPECT_EQ(item->question, "What is the capital of the country where this church is located?");
  EXPECT_EQ(item->answer.text, "Stockholm");
  EXPECT_EQ(item->hops, 2);
  EXPECT_EQ(item->group_key, "capital");
  EXPECT_EQ(item->path.steps, (std::vector<std::string>{"country", "capital"}));
}

TEST_F(GeneratorTest, MultiHopArchitectBirthNesting) {
  auto sub = kg_.neighborhood(EntityId("E3"), 2);
  auto result =
      generate_multi_hop(EntityId("E3"), PropertyPath{{"architect", "date of birth"}}, sub, "skyscraper", bank_);
  const auto* item = std::get_if<QAItem>(&result);
  ASSERT_NE(item, nullptr);
  EXPECT_EQ(item->question, "When was the architect of this skyscraper born?");
  EXPECT_EQ(item->answer.text, "12 October 1926");
  EXPECT_EQ(item->answer_category, AnswerCategory::kDate);
  EXPECT_EQ(item->domains, bank_.domains_of("date of birth"));
}

TEST_F(GeneratorTest, PathOfLengthOneEqualsOneHop) {
  auto sub = kg_.neighborhood(EntityId("E3"), 1);
  auto multi = generate_multi_hop(EntityId("E3"), PropertyPath{{"architect"}}, sub, "skyscraper", bank_);
  auto st = kg_.statements_of(EntityId("E3"), std::set<std::string>{"P84"});
  auto one = generate_one_hop(EntityId("E3"), st.at(0), "skyscraper", bank_);
  ASSERT_TRUE(std::holds_alternative<QAItem>(multi));
  ASSERT_TRUE(std::holds_alternative<QAItem>(one));
  EXPECT_EQ(std::get<QAItem>(multi).question, std::get<QAItem>(one).question);
  EXPECT_EQ(std::get<QAItem>(multi).answer.text, std::get<QAItem>(one).answer.text);
}

TEST_F(GeneratorTest, BrokenChainIsPathInvalid) {
  auto sub = kg_.neighborhood(EntityId("E2"), 2);
  // height is a number; nothing can follow it
  EXPECT_THROW(generate_multi_hop(EntityId("E2"), PropertyPath{{"height", "capital"}}, sub, "church", bank_),
               PathInvalidError);
  std::vector<Statement> chain = {kg_.statements_of(EntityId("E2"), std::set<std::string>{"P17"}).at(0),
                                  kg_.statements_of(EntityId("E21"), std::set<std::string>{"P36"}).at(0)};
  EXPECT_THROW(compose_question(EntityId("E2"), chain, "this church", bank_), PathInvalidError);
}

TEST_F(GeneratorTest, MissingSubClauseIsSkip) {
  // "date of birth" has no sub-clause, so it cannot be traversed
  Statement first{EntityId("A"), PropertyId{"P569", "date of birth"}, EntityRef{EntityId("B"), "b"}};
  Statement second{EntityId("B"), PropertyId{"P84", "architect"}, EntityRef{EntityId("C"), "c"}};
  std::vector<Statement> chain{first, second};
  EXPECT_TRUE(std::holds_alternative<SkipSignal>(compose_question(EntityId("A"), chain, "this a", bank_)));
}

TEST(SceneGraphClause, Concatenation) {
  EXPECT_EQ(scene_graph_clause(SceneRelation{"i", "1", "parked next to", "sidewalk"}, "car"),
            "the car parked next to the sidewalk");
  EXPECT_EQ(scene_graph_clause(SceneRelation{"i", "1", "sitting on", "bench"}, "dog"), "the dog sitting on the bench");
  EXPECT_THROW(scene_graph_clause(SceneRelation{"i", "1", "", "bench"}, "dog"), InputError);
}

TEST_F(GeneratorTest, ChurchImageHasFigureOneQuestions) {
  auto q = run(landmark("gld-0101", kChurchUrl));
  const auto* height = find(q, "How high is this church?");
  const auto* capital = find(q, "What is the capital of the country where this church is located?");
  ASSERT_NE(height, nullptr);
  ASSERT_NE(capital, nullptr);
  EXPECT_EQ(height->answer.text, "72 metre");
  EXPECT_EQ(capital->answer.text, "Stockholm");
  EXPECT_EQ(capital->source, ImageSource::kGLDv2);
  EXPECT_EQ(capital->image_id, "gld-0101");
}

// Paths enumerated by hand from the fixture for the church at two hops.
TEST_F(GeneratorTest, ChurchQuestionsMatchHandEnumeration) {
  auto q = run(landmark("gld-0101", kChurchUrl));
  auto qs = questions(q);
  std::set<std::string> got(qs.begin(), qs.end());
  std::set<std::string> expected = {
      "Who designed this church?",
      "What is the country of citizenship of the architect of this church?",
      "When was the architect of this church born?",
      "Who is the mother of the architect of this church?",
      "Where was the architect of this church born?",
      "What is the sex or gender of the architect of this church?",
      "In which country is this church?",
      "What is the capital of the country where this church is located?",
      "On which continent is the country where this church is located?",
      "What is the currency of the country where this church is located?",
      "What is the official language of the country where this church is located?",
      "What is the population of the country where this church is located?",
      "How high is this church?",
      "When was this church established?",
      "In which administrative area is this church located?",
      "What is the population of the administrative area where this church is located?",
  };
  EXPECT_EQ(got, expected);
  EXPECT_EQ(q.items.size(), expected.size());
}

TEST_F(GeneratorTest, DomainFilterWithoutMatchesIsEmpty) {
  GeneratorConfig config;
  config.domain_filter = std::set<DomainTag>{DomainTag::parse("Food & Nutrition")};
  auto q = run(landmark("gld-0101", kChurchUrl), config);
  EXPECT_TRUE(q.items.empty());
}

TEST_F(GeneratorTest, DomainFilterKeepsOnlyMatchingOutermostProperty) {
  GeneratorConfig config;
  config.domain_filter = std::set<DomainTag>{DomainTag::parse("Economics & Labor")};
  auto q = run(landmark("gld-0101", kChurchUrl), config);
  ASSERT_EQ(q.items.size(), 1u);
  EXPECT_EQ(q.items[0].group_key, "currency");
}

TEST_F(GeneratorTest, MaxHopsOneHasOnlyOneHop) {
  GeneratorConfig config;
  config.max_hops = 1;
  auto q = run(landmark("gld-0201", kTowersUrl), config);
  ASSERT_FALSE(q.items.empty());
  for (const auto& item : q.items) EXPECT_EQ(item.hops, 1);
}

TEST_F(GeneratorTest, MaxHopsThreeReachesThreeHops) {
  GeneratorConfig config;
  config.max_hops = 3;
  auto q = run(landmark("gld-0201", kTowersUrl), config);
  bool three = std::any_of(q.items.begin(), q.items.end(), [](const QAItem& i) { return i.hops == 3; });
  EXPECT_TRUE(three);
  EXPECT_NE(find(q, "What is the capital of the country of citizenship of the architect of this skyscraper?"), nullptr);
}

TEST_F(GeneratorTest, ItemsAreWellFormed) {
  GeneratorConfig config;
  config.max_hops = 3;
  for (const auto& image : {landmark("gld-0101", kChurchUrl), landmark("gld-0201", kTowersUrl), street()}) {
    auto q = run(image, config);
    for (const auto& item : q.items) {
      EXPECT_EQ(item.question.find("__"), std::string::npos) << item.question;
      EXPECT_EQ(static_cast<std::size_t>(item.hops), item.path.size());
      EXPECT_EQ(item.group_key, item.path.outermost());
      EXPECT_LE(item.choices.size(), 4u);
      ASSERT_GE(item.gold_index, 0);
      ASSERT_LT(static_cast<std::size_t>(item.gold_index), item.choices.size());
      EXPECT_EQ(item.choices[item.gold_index], item.answer.text);
      EXPECT_EQ(std::count(item.choices.begin(), item.choices.end(), item.answer.text), 1);
      EXPECT_TRUE(item.question_id.starts_with(item.image_id + "-q"));
      EXPECT_EQ(item.uses_scene_graph, item.question.find("this ") == std::string::npos) << item.question;
    }
  }
}

TEST_F(GeneratorTest, SceneGraphClauseReplacesThisClass) {
  GeneratorConfig always;
  always.scene_graph_probability = 1.0;
  auto q = run(street(), always);
  ASSERT_FALSE(q.items.empty());
  for (const auto& item : q.items) {
    EXPECT_TRUE(item.uses_scene_graph);
    EXPECT_NE(item.question.find("the motor vehicle parked next to the sidewalk"), std::string::npos);
  }
  GeneratorConfig never;
  never.scene_graph_probability = 0.0;
  for (const auto& item : run(street(), never).items) {
    EXPECT_FALSE(item.uses_scene_graph);
    EXPECT_NE(item.question.find("this motor vehicle"), std::string::npos);
  }
}

TEST_F(GeneratorTest, SkipsAreReportedNotFatal) {
  auto q = run(street());
  ASSERT_EQ(q.skips.size(), 1u);
  EXPECT_EQ(q.skips[0].object_id, "3");
  ObjectAnnotation zebra;
  zebra.image_id = "x";
  zebra.object_id = "1";
  zebra.synset_name = "zebra.n.01";
  auto z = run(ImageInput{"x", ImageSource::kVG, {zebra}, {}});
  EXPECT_TRUE(z.items.empty());
  ASSERT_EQ(z.skips.size(), 1u);
}

TEST_F(GeneratorTest, DeterministicAcrossGenerators) {
  GeneratorConfig config;
  config.seed = 42;
  auto a = run(street(), config);
  auto b = run(street(), config);
  ASSERT_EQ(a.items.size(), b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) EXPECT_EQ(to_json(a.items[i]), to_json(b.items[i]));
}

TEST_F(GeneratorTest, DeduplicatesWithinImage) {
  // the same object twice in one image yields each question once
  auto image = landmark("gld-0101", kChurchUrl);
  auto twice = image;
  auto copy = image.objects[0];
  copy.object_id = "1";
  twice.objects.push_back(copy);
  EXPECT_EQ(run(twice).items.size(), run(image).items.size());
}

TEST_F(GeneratorTest, EnumerationRespectsBranchCap) {
  Statement s{EntityId("A"), PropertyId{"P84", "architect"}, Literal{"x"}};
  KnowledgeSubgraph sub{EntityId("A"), {}, 1};
  for (int i = 0; i < 6; ++i) sub.statements.push_back(Statement{EntityId("A"), s.property, Literal{std::to_string(i)}});
  GeneratorConfig config;
  config.branch_cap = 2;
  QuestionGenerator gen(kg_, bank_, linker_, config);
  EXPECT_EQ(gen.enumerate_chains(EntityId("A"), sub).size(), 2u);
}

TEST(GeneratorConfig, Validation) {
  GeneratorConfig c;
  c.max_hops = 4;
  EXPECT_THROW(c.validate(), ConfigError);
  c.max_hops = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.scene_graph_probability = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(GroupByImage, RejectsImagesInBothSources) {
  ObjectAnnotation vg;
  vg.image_id = "same";
  vg.object_id = "1";
  vg.synset_name = "dog.n.01";
  ObjectAnnotation gld = vg;
  gld.source = ImageSource::kGLDv2;
  std::vector<ObjectAnnotation> objects{vg, gld};
  EXPECT_THROW(group_by_image(objects, {}), ValidationError);
}

}  // namespace
}  // namespace kgvqa
