#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kgvqa {

inline constexpr std::string_view kPlaceholder = "__";

enum class AnswerCategory { kFixed, kDate, kNumber, kLiteral };

std::string_view to_string(AnswerCategory category);
AnswerCategory parse_answer_category(std::string_view text);

// One of the twenty fixed knowledge domains.
class DomainTag {
 public:
  static constexpr std::size_t kCount = 20;
  static const std::array<std::string_view, kCount>& all_names();

  // Throws ValidationError for a name outside the list.
  static DomainTag parse(std::string_view name);

  std::string_view name() const { return all_names()[index_]; }

  auto operator<=>(const DomainTag&) const = default;

 private:
  explicit DomainTag(std::size_t index) : index_(index) {}
  std::size_t index_ = 0;
};

struct Template {
  std::string property_label;
  std::string main_text;                       // exactly one "__"
  std::optional<std::string> sub_clause_text;  // exactly one "__" when present
  AnswerCategory answer_category = AnswerCategory::kLiteral;
  std::set<DomainTag> domains;                 // non-empty
  std::vector<std::string> fixed_choice_pool;  // >= 4 entries iff category is fixed

  // Terminal properties can end a path but not be traversed through.
  bool is_terminal() const { return !sub_clause_text.has_value(); }
};

std::size_t count_placeholders(std::string_view text);

// Literal substitution of the single "__". Throws InputError unless exactly
// one placeholder is present.
std::string fill(std::string_view text_with_placeholder, std::string_view filler);

// Per-property templates loaded from a TSV file with header
//   property  main  subclause  category  domains  fixed_pool
// (subclause and fixed_pool may be empty; domains and fixed_pool are '|'-separated).
class TemplateBank {
 public:
  static TemplateBank load(const std::filesystem::path& path);
  static TemplateBank parse(std::istream& in, std::string_view source_name = "<stream>");

  // Writes the same TSV format, rows sorted by property.
  void save(std::ostream& out) const;

  const Template* find(std::string_view property_label) const;
  // Throws NotFoundError.
  const Template& at(std::string_view property_label) const;
  const std::set<DomainTag>& domains_of(std::string_view property_label) const;

  std::size_t size() const { return templates_.size(); }
  std::size_t sub_clause_count() const;
  auto begin() const { return templates_.begin(); }
  auto end() const { return templates_.end(); }

 private:
  std::map<std::string, Template, std::less<>> templates_;
};

// Throws ValidationError naming the offending field.
void validate(const Template& t);

}  // namespace kgvqa
