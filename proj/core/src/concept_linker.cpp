#include "kgvqa/concept_linker.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "kgvqa/errors.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

std::string_view to_string(ImageSource source) { return source == ImageSource::kVG ? "VG" : "GLDv2"; }

ImageSource parse_image_source(std::string_view text) {
  if (text == "VG") return ImageSource::kVG;
  if (text == "GLDv2") return ImageSource::kGLDv2;
  throw InputError(fmt::format("unknown image source '{}'", text));
}

bool is_valid_synset_name(std::string_view name) {
  auto parts = split(name, '.');
  // Lemmas may themselves contain dots ("st._john's_wort.n.01"), so count from the right.
  if (parts.size() < 3) return false;
  const auto& pos = parts[parts.size() - 2];
  const auto& sense = parts.back();
  auto lemma_len = name.size() - pos.size() - sense.size() - 2;
  if (lemma_len == 0) return false;
  if (pos.size() != 1 || std::string_view("nvars").find(pos[0]) == std::string_view::npos) return false;
  if (sense.empty()) return false;
  for (char c : sense) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return std::stoi(sense) > 0;
}

WordNetIndex WordNetIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open WordNet index '{}'", path.string()));
  return parse(in, path.string());
}

WordNetIndex WordNetIndex::parse(std::istream& in, std::string_view source_name) {
  WordNetIndex index;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw ValidationError(fmt::format("{}:{}: expected 'name<TAB>id'", source_name, number));
    }
    auto name = std::string(view.substr(0, tab));
    auto id = std::string(trim(view.substr(tab + 1)));
    if (!is_valid_synset_name(name) || !KgStore::is_valid_synset_id(id)) {
      throw ValidationError(fmt::format("{}:{}: malformed entry '{}'", source_name, number, line));
    }
    index.ids_[name] = id;
  }
  return index;
}

std::string WordNetIndex::synset_id(std::string_view synset_name) const {
  if (!is_valid_synset_name(synset_name)) {
    throw InputError(fmt::format("malformed synset name '{}'", synset_name));
  }
  auto it = ids_.find(synset_name);
  if (it == ids_.end()) throw NotFoundError(fmt::format("synset '{}' not in WordNet index", synset_name));
  return it->second;
}

std::string landmark_name_from_url(std::string_view url) {
  auto scheme = url.find("://");
  if (scheme == std::string_view::npos) throw InputError(fmt::format("unparsable URL '{}'", url));
  auto rest = url.substr(scheme + 3);
  rest = rest.substr(0, rest.find_first_of("?#"));
  auto slash = rest.find('/');
  if (slash == std::string_view::npos || slash == 0) throw InputError(fmt::format("URL '{}' has no path", url));
  auto path = rest.substr(slash);
  auto segment = path.substr(path.rfind('/') + 1);
  if (segment.empty()) throw InputError(fmt::format("URL '{}' has an empty last segment", url));

  auto name = percent_decode(segment);
  constexpr std::string_view kCategory = "Category:";
  if (name.starts_with(kCategory)) name.erase(0, kCategory.size());
  for (char& c : name) {
    if (c == '_') c = ' ';
  }
  auto trimmed = trim(name);
  if (trimmed.empty()) throw InputError(fmt::format("URL '{}' carries no name", url));
  return std::string(trimmed);
}

std::optional<EntityId> ConceptLinker::via_synset(const ObjectAnnotation& annotation) const {
  if (!annotation.synset_name) return std::nullopt;
  try {
    return kg_.entity_by_synset_id(wordnet_.synset_id(*annotation.synset_name));
  } catch (const NotFoundError&) {
    return std::nullopt;
  }
}

std::optional<EntityId> ConceptLinker::via_url(const ObjectAnnotation& annotation) const {
  if (!annotation.wikimedia_url) return std::nullopt;
  return kg_.entity_by_commons_name(landmark_name_from_url(*annotation.wikimedia_url));
}

std::optional<EntityId> ConceptLinker::link(const ObjectAnnotation& annotation) const {
  if (!annotation.synset_name && !annotation.wikimedia_url) {
    throw InputError(fmt::format("object {}/{} has neither synset nor URL", annotation.image_id,
                                 annotation.object_id));
  }
  auto by_synset = via_synset(annotation);
  if (by_synset && annotation.wikimedia_url) {
    if (auto by_url = via_url(annotation); by_url && *by_url != *by_synset) {
      spdlog::warn("object {}/{}: synset links {} but URL links {}; keeping the synset match",
                   annotation.image_id, annotation.object_id, by_synset->str(), by_url->str());
    }
  }
  if (by_synset) return by_synset;
  return via_url(annotation);
}

namespace {

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::vector<ObjectAnnotation> read_vg_objects(const std::filesystem::path& path) {
  std::vector<ObjectAnnotation> out;
  for_each_json_line(path, [&](const nlohmann::json& j) {
    ObjectAnnotation a;
    a.image_id = j.at("image_id").get<std::string>();
    a.object_id = j.at("object_id").get<std::string>();
    a.synset_name = optional_string(j, "synset_name");
    a.wikimedia_url = optional_string(j, "wikimedia_url");
    if (auto it = j.find("bbox"); it != j.end() && !it->is_null()) a.bbox = it->get<std::array<int, 4>>();
    a.source = ImageSource::kVG;
    if (!a.synset_name && !a.wikimedia_url) {
      throw ValidationError(fmt::format("{}: object {}/{} has neither synset_name nor wikimedia_url",
                                        path.string(), a.image_id, a.object_id));
    }
    out.push_back(std::move(a));
  });
  return out;
}

// Comma-separated with optional double-quoted fields ("" escapes a quote).
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back().push_back(c);
    }
  }
  if (quoted) throw InputError("unterminated quoted field");
  return cells;
}

std::vector<ObjectAnnotation> read_gld_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(fmt::format("{}: empty CSV", path.string()));
  auto header = split_csv_line(trim(line));
  std::optional<std::size_t> image_col, url_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "image_id") image_col = i;
    if (header[i] == "wikimedia_url") url_col = i;
  }
  if (!image_col || !url_col) {
    throw ValidationError(fmt::format("{}: header must name image_id and wikimedia_url", path.string()));
  }
  std::vector<ObjectAnnotation> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    auto view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string> cells;
    try {
      cells = split_csv_line(view);
    } catch (const InputError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
    // Unquoted URLs may contain commas (",_Stockholm"); the URL column then
    // takes the remainder of the line when it is last.
    if (cells.size() < header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} columns", path.string(), number, header.size()));
    }
    if (*url_col == header.size() - 1) {
      std::vector<std::string> tail(cells.begin() + static_cast<std::ptrdiff_t>(*url_col), cells.end());
      cells.resize(*url_col);
      cells.push_back(join(tail, ","));
    } else if (cells.size() != header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} columns", path.string(), number, header.size()));
    }
    ObjectAnnotation a;
    a.image_id = cells[*image_col];
    a.object_id = "0";
    a.wikimedia_url = cells[*url_col];
    a.source = ImageSource::kGLDv2;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<SceneRelation> read_scene_relations(const std::filesystem::path& path) {
  std::vector<SceneRelation> out;
  for_each_json_line(path, [&](const nlohmann::json& j) {
    out.push_back(SceneRelation{j.at("image_id").get<std::string>(), j.at("subject_object_id").get<std::string>(),
                                j.at("predicate").get<std::string>(), j.at("object_label").get<std::string>()});
  });
  return out;
}

}  // namespace kgvqa
