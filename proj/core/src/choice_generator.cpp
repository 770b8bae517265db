#include "kgvqa/choice_generator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace kgvqa {

namespace {

constexpr int kDateWindowYears = 10;
constexpr int kMaxDecimals = 10;

// Draws up to `count` distinct integers from [lo, hi] \ {excluded}.
std::vector<long long> sample_integers(long long lo, long long hi, long long excluded, int count, Rng& rng) {
  std::vector<long long> out;
  if (hi < lo || count <= 0) return out;
  auto span = static_cast<unsigned long long>(hi - lo) + 1;
  auto available = span - ((excluded >= lo && excluded <= hi) ? 1 : 0);
  if (available <= static_cast<unsigned long long>(count) * 4) {
    // Small ranges: enumerate and shuffle so exhaustion is exact.
    std::vector<long long> all;
    for (long long v = lo; v <= hi; ++v) {
      if (v != excluded) all.push_back(v);
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(count)));
    return all;
  }
  std::uniform_int_distribution<long long> dist(lo, hi);
  std::set<long long> seen;
  while (out.size() < static_cast<std::size_t>(count)) {
    auto v = dist(rng);
    if (v == excluded || !seen.insert(v).second) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace

NumericRange numeric_distractor_range(double gold, int count) {
  if (gold > 0) {
    double low = gold / 2;
    return {low, std::max(1.5 * gold, low + 2.0 * count), false};
  }
  return {gold - count, gold + count, true};
}

int decimal_places(double value) {
  auto text = render_number(value);
  if (text.find_first_of("eE") != std::string::npos) {
    if (value == std::floor(value)) return 0;
    return std::min(kMaxDecimals, static_cast<int>(std::ceil(-std::log10(std::fabs(value)))) + 3);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return 0;
  return std::min(kMaxDecimals, static_cast<int>(text.size() - dot - 1));
}

std::vector<double> number_distractors(double gold, int count, Rng& rng) {
  if (!std::isfinite(gold)) return {};
  auto range = numeric_distractor_range(gold, count);
  int decimals = decimal_places(gold);
  double scale = std::pow(10.0, decimals);
  constexpr double kLimit = 9.0e15;
  if (std::fabs(range.high * scale) > kLimit || std::fabs(range.low * scale) > kLimit) {
    // Too large for an integer grid; sample reals and keep gold's rendering style.
    std::uniform_real_distribution<double> dist(range.low, range.high);
    std::vector<double> out;
    std::set<std::string> seen{render_number(gold)};
    for (int attempt = 0; out.size() < static_cast<std::size_t>(count) && attempt < 1000; ++attempt) {
      double v = std::round(dist(rng));
      if (v < range.low || v > range.high) continue;
      if (seen.insert(render_number(v)).second) out.push_back(v);
    }
    return out;
  }
  // Work on the integer grid {k / scale}; keeps every value inside the range.
  auto lo = static_cast<long long>(std::ceil(range.low * scale));
  auto hi = static_cast<long long>(std::floor(range.high * scale));
  while (static_cast<double>(lo) / scale < range.low) ++lo;
  while (static_cast<double>(hi) / scale > range.high) --hi;
  auto gold_k = std::llround(gold * scale);
  std::vector<double> out;
  for (auto k : sample_integers(lo, hi, gold_k, count, rng)) out.push_back(static_cast<double>(k) / scale);
  return out;
}

std::vector<Date> date_distractors(const Date& gold, int count, Rng& rng) {
  using namespace std::chrono;
  std::vector<Date> out;
  switch (gold.precision) {
    case DatePrecision::kYear:
      for (auto y : sample_integers(gold.year - kDateWindowYears, gold.year + kDateWindowYears, gold.year, count, rng)) {
        out.push_back(Date::make(static_cast<int>(y), 0, 0, DatePrecision::kYear));
      }
      break;
    case DatePrecision::kMonth: {
      long long gold_index = static_cast<long long>(gold.year) * 12 + (gold.month - 1);
      long long window = 12LL * kDateWindowYears;
      for (auto m : sample_integers(gold_index - window, gold_index + window, gold_index, count, rng)) {
        auto year = static_cast<int>(m >= 0 ? m / 12 : -((-m + 11) / 12));
        auto month = static_cast<unsigned>(m - static_cast<long long>(year) * 12) + 1;
        out.push_back(Date::make(year, month, 0, DatePrecision::kMonth));
      }
      break;
    }
    case DatePrecision::kDay: {
      auto clamp_day = [&](int year) {
        year_month_day_last last{std::chrono::year{year}, month_day_last{std::chrono::month{gold.month}}};
        auto d = std::min(gold.day, static_cast<unsigned>(last.day()));
        return sys_days{std::chrono::year{year} / std::chrono::month{gold.month} / std::chrono::day{d}};
      };
      sys_days g{std::chrono::year{gold.year} / std::chrono::month{gold.month} / std::chrono::day{gold.day}};
      auto lo = clamp_day(gold.year - kDateWindowYears);
      auto hi = clamp_day(gold.year + kDateWindowYears);
      for (auto day : sample_integers(lo.time_since_epoch().count(), hi.time_since_epoch().count(),
                                      g.time_since_epoch().count(), count, rng)) {
        year_month_day ymd{sys_days{days{day}}};
        out.push_back(Date::make(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                                 static_cast<unsigned>(ymd.day()), DatePrecision::kDay));
      }
      break;
    }
  }
  return out;
}

std::vector<std::string> pool_distractors(std::string_view gold, std::span<const std::string> pool, int count,
                                          Rng& rng) {
  std::set<std::string> unique(pool.begin(), pool.end());
  unique.erase(std::string(gold));
  std::vector<std::string> candidates(unique.begin(), unique.end());
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(std::max(count, 0))));
  return candidates;
}

Distractors gen_false_choices(const Answer& gold, AnswerCategory category, const DistractorContext& context,
                              int count, Rng& rng) {
  Distractors out;
  switch (category) {
    case AnswerCategory::kFixed:
      out.values = pool_distractors(gold.text, context.fixed_pool, count, rng);
      if (context.fixed_pool.empty()) spdlog::warn("empty fixed pool for answer '{}'", gold.text);
      break;
    case AnswerCategory::kLiteral:
      out.values = pool_distractors(gold.text, context.literal_pool, count, rng);
      if (out.values.empty()) spdlog::warn("no same-property values to draw from for answer '{}'", gold.text);
      break;
    case AnswerCategory::kDate: {
      const auto* date = std::get_if<Date>(&gold.value);
      if (!date) break;
      for (const auto& d : date_distractors(*date, count, rng)) out.values.push_back(render_date(d));
      break;
    }
    case AnswerCategory::kNumber: {
      const auto* quantity = std::get_if<Quantity>(&gold.value);
      if (!quantity || !std::isfinite(quantity->value)) break;
      out.degenerate_range = numeric_distractor_range(quantity->value, count).degenerate;
      int decimals = decimal_places(quantity->value);
      for (double v : number_distractors(quantity->value, count, rng)) {
        auto number = decimals == 0 ? render_number(v) : fmt::format("{:.{}f}", v, decimals);
        out.values.push_back(quantity->unit.empty() ? number : number + " " + quantity->unit);
      }
      break;
    }
  }
  // Distinct from gold and from each other, whatever the category.
  std::set<std::string> seen{gold.text};
  std::erase_if(out.values, [&](const std::string& v) { return !seen.insert(v).second; });
  return out;
}

AnswerCategory categorize(const Template& tmpl, const Answer& answer) {
  switch (tmpl.answer_category) {
    case AnswerCategory::kNumber:
      return std::holds_alternative<Quantity>(answer.value) ? AnswerCategory::kNumber : AnswerCategory::kLiteral;
    case AnswerCategory::kDate:
      return std::holds_alternative<Date>(answer.value) ? AnswerCategory::kDate : AnswerCategory::kLiteral;
    default:
      return tmpl.answer_category;
  }
}

ShuffledChoices shuffle_choices(const std::string& gold, const std::vector<std::string>& distractors, Rng& rng) {
  ShuffledChoices out;
  out.choices.reserve(distractors.size() + 1);
  out.choices.push_back(gold);
  out.choices.insert(out.choices.end(), distractors.begin(), distractors.end());
  std::shuffle(out.choices.begin(), out.choices.end(), rng);
  out.gold_index = static_cast<int>(std::find(out.choices.begin(), out.choices.end(), gold) - out.choices.begin());
  return out;
}

}  // namespace kgvqa
