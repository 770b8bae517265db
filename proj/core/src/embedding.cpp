#include "kgvqa/embedding.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include <fcntl.h>
#include <netdb.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

#include "kgvqa/errors.hpp"
#include "kgvqa/metrics.hpp"
#include "kgvqa/text.hpp"

namespace kgvqa {

namespace {

const std::set<std::string, std::less<>>& stop_words() {
  static const std::set<std::string, std::less<>> words = {
      "a", "an", "the", "is", "are", "was", "were", "of", "it", "its", "this", "that", "in", "on", "at", "to", "by"};
  return words;
}

const std::map<std::string, std::string, std::less<>>& synonyms() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"man", "male"},       {"men", "male"},       {"boy", "male"},      {"masculine", "male"},
      {"woman", "female"},   {"women", "female"},   {"girl", "female"},   {"feminine", "female"},
      {"meter", "metre"},    {"meters", "metre"},   {"metres", "metre"},  {"m", "metre"},
      {"kilometer", "kilometre"}, {"kilometers", "kilometre"}, {"kilometres", "kilometre"}, {"km", "kilometre"},
      {"usa", "united states"}, {"america", "united states"},
      {"uk", "united kingdom"}, {"britain", "united kingdom"},
      {"tall", "high"},      {"height", "high"},
  };
  return table;
}

void send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    auto n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(fmt::format("sidecar write failed: {}", std::strerror(errno)));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// Reads up to '\n' from fd, buffering the remainder.
std::string read_line(int fd, std::string& buffer) {
  while (true) {
    if (auto nl = buffer.find('\n'); nl != std::string::npos) {
      auto line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    auto n = ::read(fd, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw TransportError("sidecar closed the connection");
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

class TcpChannel : public LineChannel {
 public:
  explicit TcpChannel(int fd) : fd_(fd) {}
  ~TcpChannel() override { ::close(fd_); }
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  void send_line(const std::string& line) override { send_all(fd_, line + "\n"); }
  std::string receive_line() override { return read_line(fd_, buffer_); }

 private:
  int fd_;
  std::string buffer_;
};

class ProcessChannel : public LineChannel {
 public:
  ProcessChannel(pid_t pid, int to_child, int from_child) : pid_(pid), to_child_(to_child), from_child_(from_child) {}
  ~ProcessChannel() override {
    ::close(to_child_);
    ::close(from_child_);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  ProcessChannel(const ProcessChannel&) = delete;
  ProcessChannel& operator=(const ProcessChannel&) = delete;

  void send_line(const std::string& line) override { send_all(to_child_, line + "\n"); }
  std::string receive_line() override { return read_line(from_child_, buffer_); }

 private:
  pid_t pid_;
  int to_child_;
  int from_child_;
  std::string buffer_;
};

}  // namespace

std::vector<std::string> StubEmbeddingProvider::features(std::string_view text) {
  std::vector<std::string> out{"<bias>"};
  for (auto& word : answer_words(text)) {
    if (stop_words().contains(word)) continue;
    auto it = synonyms().find(word);
    out.push_back(it == synonyms().end() ? word : it->second);
  }
  return out;
}

Embedding StubEmbeddingProvider::embed_one(std::string_view text) const {
  // The bias only keeps "" embeddable; at full weight it would pull every
  // one-word pair up to 1/sqrt(2).
  constexpr float kBiasWeight = 0.25f;
  Embedding v(kDim, 0.0f);
  for (const auto& f : features(text)) {
    auto h = stable_hash(f);
    float w = f == "<bias>" ? kBiasWeight : 1.0f;
    v[h % kDim] += (h >> 63) ? -w : w;
  }
  double norm = 0;
  for (float x : v) norm += double(x) * x;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (float& x : v) x = static_cast<float>(x / norm);
  }
  return v;
}

std::vector<Embedding> StubEmbeddingProvider::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

std::unique_ptr<LineChannel> connect_tcp(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ConfigError(fmt::format("sidecar address '{}' is not host:port", address));
  auto host = address.substr(0, colon);
  auto port = address.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found); rc != 0) {
    throw TransportError(fmt::format("cannot resolve sidecar {}: {}", address, ::gai_strerror(rc)));
  }
  int fd = -1;
  for (auto* ai = found; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) throw TransportError(fmt::format("cannot connect to sidecar at {}", address));
  return std::make_unique<TcpChannel>(fd);
}

std::unique_ptr<LineChannel> spawn_process(const std::vector<std::string>& argv) {
  if (argv.empty()) throw ConfigError("empty sidecar command");
  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0) throw TransportError("pipe() failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe() failed");
  }
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  ::signal(SIGPIPE, SIG_IGN);  // a dead child surfaces as a write error instead
  pid_t pid = ::fork();
  if (pid < 0) throw TransportError("fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  return std::make_unique<ProcessChannel>(pid, in_pipe[1], out_pipe[0]);
}

SidecarEmbeddingProvider::SidecarEmbeddingProvider(std::unique_ptr<LineChannel> channel, std::string label)
    : channel_(std::move(channel)), label_(std::move(label)) {
  if (!channel_) throw ConfigError("sidecar provider needs a channel");
}

std::vector<Embedding> SidecarEmbeddingProvider::embed(std::span<const std::string> texts) {
  auto id = next_id_++;
  nlohmann::json request = {{"id", id}, {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  channel_->send_line(request.dump());
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(channel_->receive_line());
  } catch (const nlohmann::json::parse_error& e) {
    throw TransportError(fmt::format("sidecar sent malformed JSON: {}", e.what()));
  }
  if (response.value("id", -1LL) != id) {
    throw TransportError(fmt::format("sidecar answered request {} with id {}", id, response.value("id", -1LL)));
  }
  if (response.contains("error")) {
    throw TransportError(fmt::format("sidecar error: {}", response["error"].dump()));
  }
  auto dim = response.at("dim").get<std::size_t>();
  auto vectors = response.at("vectors").get<std::vector<Embedding>>();
  if (vectors.size() != texts.size()) {
    throw TransportError(fmt::format("sidecar returned {} vectors for {} texts", vectors.size(), texts.size()));
  }
  for (const auto& v : vectors) {
    if (v.size() != dim) throw TransportError("sidecar vector length differs from dim");
  }
  return vectors;
}

std::unique_ptr<EmbeddingProvider> make_provider(const std::string& descriptor) {
  if (descriptor == "stub") return std::make_unique<StubEmbeddingProvider>();
  constexpr std::string_view kTcp = "sidecar:";
  constexpr std::string_view kExec = "sidecar-exec:";
  if (descriptor.starts_with(kExec)) {
    auto argv = split_whitespace(descriptor.substr(kExec.size()));
    return std::make_unique<SidecarEmbeddingProvider>(spawn_process(argv), descriptor);
  }
  if (descriptor.starts_with(kTcp)) {
    return std::make_unique<SidecarEmbeddingProvider>(connect_tcp(descriptor.substr(kTcp.size())), descriptor);
  }
  throw ConfigError(fmt::format("unknown embedding provider '{}' (stub | sidecar:host:port | sidecar-exec:cmd)", descriptor));
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw InputError("cosine of vectors with different dimensions");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double semantic_score(const std::string& pred, const std::string& gold, EmbeddingProvider& provider) {
  std::vector<std::string> texts{pred, gold};
  auto vectors = provider.embed(texts);
  return cosine(vectors[0], vectors[1]);
}

}  // namespace kgvqa
