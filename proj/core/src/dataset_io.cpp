#include "kgvqa/dataset_io.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

std::vector<QAItem> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open dataset '{}'", path.string()));
  std::vector<QAItem> items;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      items.push_back(qa_item_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    } catch (const Error& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
  return items;
}

void write_dataset(const std::filesystem::path& path, std::span<const QAItem> items) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  for (const auto& item : items) out << to_json(item).dump() << '\n';
  if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << doc.dump(2) << '\n';
  if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

void sort_dataset(std::vector<QAItem>& items) {
  std::sort(items.begin(), items.end(), [](const QAItem& a, const QAItem& b) {
    return std::tie(a.image_id, a.question_id) < std::tie(b.image_id, b.question_id);
  });
}

}  // namespace kgvqa
