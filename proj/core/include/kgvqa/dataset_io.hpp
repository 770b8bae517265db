#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "kgvqa/qa_item.hpp"

namespace kgvqa {

// One QAItem per line. Errors name the offending line number.
std::vector<QAItem> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, std::span<const QAItem> items);

// Pretty-printed, trailing newline; output is a pure function of `doc`.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Sorts by (image_id, question_id).
void sort_dataset(std::vector<QAItem>& items);

}  // namespace kgvqa
