#include "kgvqa/template_bank.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

namespace {

constexpr std::array<std::string_view, DomainTag::kCount> kDomainNames = {
    "Places & Locations",
    "Person & Institutions",
    "Temporal Concepts",
    "Characteristics & Properties",
    "Language & Cultural",
    "History & Events",
    "Physical Geography",
    "Politics & Ideologies",
    "Economics & Labor",
    "Nature & Human Interaction",
    "Technology & Innovation",
    "Science & Quantitative Analysis",
    "Health & Medicine",
    "Education & Knowledge Systems",
    "Art & Creative Expressions",
    "Philosophy & Spiritual Beliefs",
    "Media & Communication Systems",
    "Environment & Sustainability",
    "Law & Justice Systems",
    "Food & Nutrition",
};

constexpr std::array<std::string_view, 6> kColumns = {"property", "main", "subclause",
                                                      "category", "domains", "fixed_pool"};

}  // namespace

std::string_view to_string(AnswerCategory category) {
  switch (category) {
    case AnswerCategory::kFixed: return "fixed";
    case AnswerCategory::kDate: return "date";
    case AnswerCategory::kNumber: return "number";
    case AnswerCategory::kLiteral: return "literal";
  }
  return "literal";
}

AnswerCategory parse_answer_category(std::string_view text) {
  if (text == "fixed") return AnswerCategory::kFixed;
  if (text == "date") return AnswerCategory::kDate;
  if (text == "number") return AnswerCategory::kNumber;
  if (text == "literal") return AnswerCategory::kLiteral;
  throw ValidationError(fmt::format("unknown answer category '{}'", text));
}

const std::array<std::string_view, DomainTag::kCount>& DomainTag::all_names() { return kDomainNames; }

DomainTag DomainTag::parse(std::string_view name) {
  for (std::size_t i = 0; i < kDomainNames.size(); ++i) {
    if (kDomainNames[i] == name) return DomainTag(i);
  }
  throw ValidationError(fmt::format("unknown domain '{}'", name));
}

std::size_t count_placeholders(std::string_view text) {
  std::size_t count = 0;
  for (auto pos = text.find(kPlaceholder); pos != std::string_view::npos;
       pos = text.find(kPlaceholder, pos + kPlaceholder.size())) {
    ++count;
  }
  return count;
}

std::string fill(std::string_view text, std::string_view filler) {
  if (auto n = count_placeholders(text); n != 1) {
    throw InputError(fmt::format("template '{}' has {} placeholders, expected 1", text, n));
  }
  auto pos = text.find(kPlaceholder);
  std::string out;
  out.reserve(text.size() + filler.size());
  out.append(text.substr(0, pos)).append(filler).append(text.substr(pos + kPlaceholder.size()));
  return out;
}

void validate(const Template& t) {
  auto fail = [&](std::string_view field, std::string_view why) {
    throw ValidationError(fmt::format("template '{}': field {}: {}", t.property_label, field, why));
  };
  if (t.property_label.empty()) fail("property", "empty");
  if (count_placeholders(t.main_text) != 1) fail("main", "must contain exactly one '__'");
  if (t.sub_clause_text && count_placeholders(*t.sub_clause_text) != 1) {
    fail("subclause", "must contain exactly one '__'");
  }
  if (t.domains.empty()) fail("domains", "at least one domain required");
  if (t.answer_category == AnswerCategory::kFixed && t.fixed_choice_pool.size() < 4) {
    fail("fixed_pool", "fixed category needs at least 4 pool entries");
  }
  if (t.answer_category != AnswerCategory::kFixed && !t.fixed_choice_pool.empty()) {
    fail("fixed_pool", "only fixed-category templates carry a pool");
  }
}

TemplateBank TemplateBank::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open template bank '{}'", path.string()));
  return parse(in, path.string());
}

TemplateBank TemplateBank::parse(std::istream& in, std::string_view source_name) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(fmt::format("{}: empty template bank", source_name));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line, '\t');
  if (header.size() != kColumns.size() || !std::equal(header.begin(), header.end(), kColumns.begin())) {
    throw ValidationError(fmt::format("{}: header must be '{}'", source_name,
                                      join({kColumns.begin(), kColumns.end()}, "<TAB>")));
  }

  TemplateBank bank;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split(line, '\t');
    auto where = fmt::format("{}:{}", source_name, row);
    if (cells.size() != kColumns.size()) {
      throw ValidationError(fmt::format("{}: expected {} fields, got {}", where, kColumns.size(), cells.size()));
    }
    Template t;
    t.property_label = cells[0];
    t.main_text = cells[1];
    if (!cells[2].empty()) t.sub_clause_text = cells[2];
    try {
      t.answer_category = parse_answer_category(cells[3]);
      for (const auto& d : split(cells[4], '|')) {
        if (!d.empty()) t.domains.insert(DomainTag::parse(d));
      }
      if (!cells[5].empty()) t.fixed_choice_pool = split(cells[5], '|');
      validate(t);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}: {}", where, e.what()));
    }
    if (bank.templates_.contains(t.property_label)) {
      throw ValidationError(fmt::format("{}: duplicate property '{}'", where, t.property_label));
    }
    auto key = t.property_label;
    bank.templates_.emplace(std::move(key), std::move(t));
  }
  return bank;
}

void TemplateBank::save(std::ostream& out) const {
  out << join({kColumns.begin(), kColumns.end()}, "\t") << '\n';
  for (const auto& [label, t] : templates_) {
    std::vector<std::string> domains;
    for (const auto& d : t.domains) domains.emplace_back(d.name());
    out << label << '\t' << t.main_text << '\t' << t.sub_clause_text.value_or("") << '\t'
        << to_string(t.answer_category) << '\t' << join(domains, "|") << '\t' << join(t.fixed_choice_pool, "|")
        << '\n';
  }
}

const Template* TemplateBank::find(std::string_view property_label) const {
  auto it = templates_.find(property_label);
  return it == templates_.end() ? nullptr : &it->second;
}

const Template& TemplateBank::at(std::string_view property_label) const {
  if (const auto* t = find(property_label)) return *t;
  throw NotFoundError(fmt::format("no template for property '{}'", property_label));
}

const std::set<DomainTag>& TemplateBank::domains_of(std::string_view property_label) const {
  return at(property_label).domains;
}

std::size_t TemplateBank::sub_clause_count() const {
  std::size_t n = 0;
  for (const auto& [label, t] : templates_) n += t.sub_clause_text ? 1 : 0;
  return n;
}

}  // namespace kgvqa
