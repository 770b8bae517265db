#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgvqa/kg_store.hpp"

namespace kgvqa {

enum class ImageSource { kVG, kGLDv2 };

std::string_view to_string(ImageSource source);
ImageSource parse_image_source(std::string_view text);

struct ObjectAnnotation {
  std::string image_id;
  std::string object_id;
  std::optional<std::string> synset_name;    // "traffic_light.n.01"
  std::optional<std::string> wikimedia_url;  // GLDv2 landmark URL
  std::optional<std::array<int, 4>> bbox;
  ImageSource source = ImageSource::kVG;
};

struct SceneRelation {
  std::string image_id;
  std::string subject_object_id;
  std::string predicate;     // "parked next to"
  std::string object_label;  // "sidewalk"
};

// lemma.pos.sense -> "offset-pos", read from "lemma.pos.sense<TAB>offset-pos" lines.
class WordNetIndex {
 public:
  static WordNetIndex load(const std::filesystem::path& path);
  static WordNetIndex parse(std::istream& in, std::string_view source_name = "<stream>");

  // Throws InputError for a malformed name, NotFoundError when absent.
  std::string synset_id(std::string_view synset_name) const;

  std::size_t size() const { return ids_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> ids_;
};

bool is_valid_synset_name(std::string_view synset_name);

// ".../Category:Maria_Magdalena_kyrka,_Stockholm" -> "Maria Magdalena kyrka, Stockholm"
std::string landmark_name_from_url(std::string_view url);

class ConceptLinker {
 public:
  ConceptLinker(const WordNetIndex& wordnet, KgStore& kg) : wordnet_(wordnet), kg_(kg) {}

  // Synset first, URL as fallback. Absent when neither resolves. Transport
  // errors propagate.
  std::optional<EntityId> link(const ObjectAnnotation& annotation) const;

 private:
  std::optional<EntityId> via_synset(const ObjectAnnotation& annotation) const;
  std::optional<EntityId> via_url(const ObjectAnnotation& annotation) const;

  const WordNetIndex& wordnet_;
  KgStore& kg_;
};

// VG-style objects: JSON lines {image_id, object_id, synset_name?, wikimedia_url?, bbox?}.
std::vector<ObjectAnnotation> read_vg_objects(const std::filesystem::path& path);
// One CSV record; fields may be double-quoted. Throws InputError on an open quote.
std::vector<std::string> split_csv_line(std::string_view line);

// GLDv2-style: CSV with header containing image_id and wikimedia_url columns.
std::vector<ObjectAnnotation> read_gld_csv(const std::filesystem::path& path);
// JSON lines {image_id, subject_object_id, predicate, object_label}.
std::vector<SceneRelation> read_scene_relations(const std::filesystem::path& path);

}  // namespace kgvqa
