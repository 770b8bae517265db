#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kgvqa {

using Embedding = std::vector<float>;

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // One unit-norm vector per text, same order. Throws TransportError when the
  // provider cannot answer.
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;
  virtual std::string name() const = 0;
};

// Deterministic hashed bag-of-words (dimension 64). Words are normalized,
// stop words dropped and a small synonym table folded ("man" -> "male") so
// that near-paraphrases share features. A constant low-weight bias feature
// keeps the empty string embeddable.
class StubEmbeddingProvider : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDim = 64;

  std::vector<Embedding> embed(std::span<const std::string> texts) override;
  std::string name() const override { return "stub"; }

  Embedding embed_one(std::string_view text) const;
  static std::vector<std::string> features(std::string_view text);
};

// Line transport to the embedding sidecar.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send_line(const std::string& line) = 0;
  virtual std::string receive_line() = 0;
};

// Connects to "host:port".
std::unique_ptr<LineChannel> connect_tcp(const std::string& address);
// Spawns `argv` and talks over its stdin/stdout.
std::unique_ptr<LineChannel> spawn_process(const std::vector<std::string>& argv);

// Client for the newline-delimited JSON embedding protocol:
//   -> {"id": 1, "texts": ["a", "b"]}
//   <- {"id": 1, "dim": 384, "vectors": [[...], [...]]}   or {"id": 1, "error": "..."}
class SidecarEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit SidecarEmbeddingProvider(std::unique_ptr<LineChannel> channel, std::string label = "sidecar");

  std::vector<Embedding> embed(std::span<const std::string> texts) override;
  std::string name() const override { return label_; }

 private:
  std::unique_ptr<LineChannel> channel_;
  std::string label_;
  long long next_id_ = 1;
};

// Builds "stub", "sidecar:host:port" or "sidecar-exec:<command line>".
std::unique_ptr<EmbeddingProvider> make_provider(const std::string& descriptor);

double cosine(std::span<const float> a, std::span<const float> b);

// Cosine similarity of the provider's embeddings of pred and gold.
double semantic_score(const std::string& pred, const std::string& gold, EmbeddingProvider& provider);

}  // namespace kgvqa
