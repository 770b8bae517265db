#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kgvqa {

// Opaque knowledge-graph entity identifier, e.g. "Q34".
class EntityId {
 public:
  EntityId() = default;
  explicit EntityId(std::string id);

  const std::string& str() const { return id_; }
  bool empty() const { return id_.empty(); }

  auto operator<=>(const EntityId&) const = default;

 private:
  std::string id_;
};

struct PropertyId {
  std::string id;     // e.g. "P84"
  std::string label;  // e.g. "architect"; key into the template bank

  auto operator<=>(const PropertyId&) const = default;
};

struct EntityRef {
  EntityId id;
  std::string label;

  auto operator<=>(const EntityRef&) const = default;
};

struct Literal {
  std::string text;

  auto operator<=>(const Literal&) const = default;
};

struct Quantity {
  double value = 0.0;
  std::string unit;  // singular unit label, empty when dimensionless

  auto operator<=>(const Quantity&) const = default;
};

enum class DatePrecision { kYear, kMonth, kDay };

// Calendar date. Components finer than `precision` are zero.
struct Date {
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;
  DatePrecision precision = DatePrecision::kYear;

  static Date make(int year, unsigned month, unsigned day, DatePrecision precision);
  // Accepts "YYYY", "YYYY-MM" or "YYYY-MM-DD" (leading '-' for BCE years).
  static Date parse(std::string_view iso, DatePrecision precision);

  auto operator<=>(const Date&) const = default;
};

using ObjectValue = std::variant<EntityRef, Literal, Quantity, Date>;

struct Statement {
  EntityId subject;
  PropertyId property;
  ObjectValue object;

  auto operator<=>(const Statement&) const = default;
};

struct KnowledgeSubgraph {
  EntityId root;
  std::vector<Statement> statements;
  int depth = 1;
};

std::string_view to_string(DatePrecision precision);
DatePrecision parse_date_precision(std::string_view text);

// ISO-ish form used in data files: "1889", "1889-03", "1889-03-31".
std::string iso_string(const Date& date);

// Human-readable rendering used in question answers and choices.
//   entity   -> its label
//   literal  -> as stored
//   quantity -> "72 metre" (shortest round-trip decimal + unit)
//   date     -> "31 March 1889" / "March 1889" / "1889"
std::string render(const ObjectValue& value);
std::string render_date(const Date& date);
std::string render_number(double value);

inline bool is_entity(const ObjectValue& value) {
  return std::holds_alternative<EntityRef>(value);
}

const EntityRef* as_entity(const ObjectValue& value);

}  // namespace kgvqa
