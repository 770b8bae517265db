#include "kgvqa/kg_types.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"

namespace kgvqa {

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("bad {} '{}' in date", what, text));
  }
  return value;
}

}  // namespace

EntityId::EntityId(std::string id) : id_(std::move(id)) {
  if (id_.empty()) throw InputError("entity id must be non-empty");
}

Date Date::make(int year, unsigned month, unsigned day, DatePrecision precision) {
  Date d{year, 0, 0, precision};
  if (precision != DatePrecision::kYear) {
    if (month < 1 || month > 12) throw InputError(fmt::format("month {} out of range", month));
    d.month = month;
  }
  if (precision == DatePrecision::kDay) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
      throw InputError(fmt::format("invalid calendar date {}-{}-{}", year, month, day));
    }
    d.day = day;
  }
  return d;
}

Date Date::parse(std::string_view iso, DatePrecision precision) {
  bool negative = !iso.empty() && iso.front() == '-';
  std::string_view rest = negative ? iso.substr(1) : iso;
  std::array<std::string_view, 3> parts{};
  std::size_t count = 0;
  while (!rest.empty()) {
    if (count == parts.size()) throw InputError(fmt::format("malformed date '{}'", iso));
    auto dash = rest.find('-');
    parts[count++] = rest.substr(0, dash);
    rest = dash == std::string_view::npos ? std::string_view{} : rest.substr(dash + 1);
  }
  std::size_t needed = precision == DatePrecision::kYear ? 1 : precision == DatePrecision::kMonth ? 2 : 3;
  if (count < needed) {
    throw InputError(fmt::format("date '{}' lacks components for {} precision", iso, to_string(precision)));
  }
  int year = parse_int(parts[0], "year");
  if (negative) year = -year;
  unsigned month = count > 1 ? static_cast<unsigned>(parse_int(parts[1], "month")) : 1;
  unsigned day = count > 2 ? static_cast<unsigned>(parse_int(parts[2], "day")) : 1;
  return make(year, month, day, precision);
}

std::string_view to_string(DatePrecision precision) {
  switch (precision) {
    case DatePrecision::kYear: return "year";
    case DatePrecision::kMonth: return "month";
    case DatePrecision::kDay: return "day";
  }
  return "year";
}

DatePrecision parse_date_precision(std::string_view text) {
  if (text == "year") return DatePrecision::kYear;
  if (text == "month") return DatePrecision::kMonth;
  if (text == "day") return DatePrecision::kDay;
  throw InputError(fmt::format("unknown date precision '{}'", text));
}

std::string iso_string(const Date& date) {
  switch (date.precision) {
    case DatePrecision::kYear: return fmt::format("{}", date.year);
    case DatePrecision::kMonth: return fmt::format("{}-{:02}", date.year, date.month);
    case DatePrecision::kDay: return fmt::format("{}-{:02}-{:02}", date.year, date.month, date.day);
  }
  return {};
}

std::string render_date(const Date& date) {
  switch (date.precision) {
    case DatePrecision::kYear: return fmt::format("{}", date.year);
    case DatePrecision::kMonth: return fmt::format("{} {}", kMonthNames[date.month - 1], date.year);
    case DatePrecision::kDay:
      return fmt::format("{} {} {}", date.day, kMonthNames[date.month - 1], date.year);
  }
  return {};
}

std::string render_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{}", value);
}

std::string render(const ObjectValue& value) {
  struct Visitor {
    std::string operator()(const EntityRef& e) const { return e.label; }
    std::string operator()(const Literal& l) const { return l.text; }
    std::string operator()(const Quantity& q) const {
      auto number = render_number(q.value);
      return q.unit.empty() ? number : number + " " + q.unit;
    }
    std::string operator()(const Date& d) const { return render_date(d); }
  };
  return std::visit(Visitor{}, value);
}

const EntityRef* as_entity(const ObjectValue& value) { return std::get_if<EntityRef>(&value); }

}  // namespace kgvqa
