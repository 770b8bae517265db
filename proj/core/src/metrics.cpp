#include "kgvqa/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kgvqa/text.hpp"

namespace kgvqa {

namespace {

bool is_ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

bool is_ascii_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Word set containment: every word of `small` occurs in `large`.
bool contained(const std::vector<std::string>& small, const std::vector<std::string>& large) {
  std::set<std::string> pool(large.begin(), large.end());
  return std::all_of(small.begin(), small.end(), [&](const std::string& w) { return pool.contains(w); });
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  return join(split_whitespace(utf8_lower(text)), " ");
}

std::vector<std::string> answer_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& word : split_whitespace(utf8_lower(text))) {
    std::string_view w = word;
    while (!w.empty() && is_ascii_punct(w.front())) w.remove_prefix(1);
    while (!w.empty() && is_ascii_punct(w.back())) w.remove_suffix(1);
    if (!w.empty()) out.emplace_back(w);
  }
  return out;
}

int exact_match(std::string_view pred, std::string_view gold) {
  return normalize_answer(pred) == normalize_answer(gold) ? 1 : 0;
}

int substring_match(std::string_view pred, std::string_view gold) {
  if (exact_match(pred, gold)) return 1;
  auto p = answer_words(pred);
  auto g = answer_words(gold);
  if (p.empty() || g.empty()) return 0;
  return contained(g, p) || contained(p, g) ? 1 : 0;
}

std::optional<int> parse_choice_letter(std::string_view text, int choices) {
  auto in_range = [&](char c) { return c >= 'A' && c < 'A' + choices; };
  auto t = trim(text);
  // Bare answers: "b", "B.", "(C)", "D)".
  std::string_view bare = t;
  while (!bare.empty() && (bare.front() == '(' || bare.front() == '[')) bare.remove_prefix(1);
  while (!bare.empty() && is_ascii_punct(bare.back())) bare.remove_suffix(1);
  if (bare.size() == 1) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(bare.front())));
    if (in_range(c)) return c - 'A';
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    if (!in_range(c)) continue;
    bool left_ok = i == 0 || !is_ascii_alnum(t[i - 1]);
    bool right_ok = i + 1 == t.size() || !is_ascii_alnum(t[i + 1]);
    if (left_ok && right_ok) return c - 'A';
  }
  return std::nullopt;
}

McScore mc_score(std::string_view pred_letter, int gold_index, int choices) {
  auto parsed = parse_choice_letter(pred_letter, choices);
  if (!parsed) return {0, false};
  return {*parsed == gold_index ? 1 : 0, true};
}

}  // namespace kgvqa
