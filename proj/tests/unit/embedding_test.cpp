#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <deque>
#include <thread>

#include <json.hpp>

#include "kgvqa/embedding.hpp"
#include "kgvqa/errors.hpp"
#include "support/fake_sidecar_protocol.hpp"

namespace kgvqa {
namespace {

using testing::SidecarFault;

double norm(const Embedding& v) {
  double s = 0;
  for (float x : v) s += double(x) * x;
  return std::sqrt(s);
}

TEST(Cosine, Basics) {
  std::vector<float> a{1, 0, 0}, b{0, 1, 0}, c{2, 0, 0}, z{0, 0, 0};
  EXPECT_DOUBLE_EQ(cosine(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, c), 1.0);
  EXPECT_DOUBLE_EQ(cosine(a, z), 0.0);
  std::vector<float> d{-1, 0, 0};
  EXPECT_DOUBLE_EQ(cosine(a, d), -1.0);
  std::vector<float> e{1, 0};
  EXPECT_THROW(cosine(a, e), InputError);
}

TEST(StubProvider, UnitNormAndDeterministic) {
  StubEmbeddingProvider stub;
  std::vector<std::string> texts{"Stockholm", "a man", "", "72 metre", "César Pelli", "the the the"};
  auto first = stub.embed(texts);
  auto second = stub.embed(texts);
  ASSERT_EQ(first.size(), texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    EXPECT_EQ(first[i].size(), StubEmbeddingProvider::kDim);
    EXPECT_NEAR(norm(first[i]), 1.0, 1e-6) << texts[i];
    EXPECT_EQ(first[i], second[i]);
    EXPECT_NEAR(cosine(first[i], stub.embed_one(texts[i])), 1.0, 1e-6);
  }
}

TEST(StubProvider, FeaturesFoldSynonymsAndStopWords) {
  EXPECT_EQ(StubEmbeddingProvider::features("A Man"), (std::vector<std::string>{"<bias>", "male"}));
  EXPECT_EQ(StubEmbeddingProvider::features("72 meters"), (std::vector<std::string>{"<bias>", "72", "metre"}));
  EXPECT_EQ(StubEmbeddingProvider::features(""), (std::vector<std::string>{"<bias>"}));
}

TEST(StubProvider, ParaphraseCloserThanUnrelated) {
  StubEmbeddingProvider stub;
  EXPECT_GT(semantic_score("72 meters", "72 metre", stub), semantic_score("Paris", "72 metre", stub));
  EXPECT_LT(semantic_score("Paris", "Stockholm", stub), 0.7);
}

// In-memory channel answering with the fake sidecar's protocol code.
class LoopbackChannel : public LineChannel {
 public:
  explicit LoopbackChannel(SidecarFault fault, std::vector<std::string>* sent = nullptr) : fault_(fault), sent_(sent) {}
  void send_line(const std::string& line) override {
    if (sent_) sent_->push_back(line);
    replies_.push_back(testing::fake_sidecar_reply(line, fault_));
  }
  std::string receive_line() override {
    if (replies_.empty()) throw TransportError("nothing to read");
    auto r = replies_.front();
    replies_.pop_front();
    return r;
  }

 private:
  SidecarFault fault_;
  std::vector<std::string>* sent_;
  std::deque<std::string> replies_;
};

TEST(SidecarProvider, ProtocolRoundTrip) {
  std::vector<std::string> sent;
  SidecarEmbeddingProvider provider(std::make_unique<LoopbackChannel>(SidecarFault::kNone, &sent));
  std::vector<std::string> texts{"male", "male", "Stockholm"};
  auto v = provider.embed(texts);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], testing::fake_sidecar_vector("male"));
  EXPECT_NEAR(cosine(v[0], v[1]), 1.0, 1e-6);
  for (const auto& e : v) EXPECT_NEAR(norm(e), 1.0, 1e-6);
  EXPECT_TRUE(provider.embed({}).empty());
  ASSERT_EQ(sent.size(), 2u);
  EXPECT_EQ(nlohmann::json::parse(sent[0]), (nlohmann::json{{"id", 1}, {"texts", texts}}));
  EXPECT_EQ(nlohmann::json::parse(sent[1])["id"], 2);
}

TEST(SidecarProvider, FaultsAreTransportErrors) {
  std::vector<std::string> texts{"a", "b"};
  for (auto fault : {SidecarFault::kError, SidecarFault::kShortBatch, SidecarFault::kWrongId, SidecarFault::kGarbage}) {
    SidecarEmbeddingProvider provider(std::make_unique<LoopbackChannel>(fault));
    EXPECT_THROW(provider.embed(texts), TransportError) << static_cast<int>(fault);
  }
}

TEST(SidecarProvider, NeedsChannel) {
  EXPECT_THROW(SidecarEmbeddingProvider(nullptr), ConfigError);
}

// One-connection TCP sidecar on an ephemeral loopback port.
class TcpSidecar {
 public:
  TcpSidecar() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    ::listen(listen_fd_, 1);
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::thread([this] { serve(); });
  }
  ~TcpSidecar() {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    thread_.join();
  }
  int port() const { return port_; }

 private:
  void serve() {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) return;
    std::string buffer;
    char chunk[4096];
    while (true) {
      auto n = ::read(fd, chunk, sizeof chunk);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n')) {
        auto reply = testing::fake_sidecar_reply(buffer.substr(0, nl)) + "\n";
        buffer.erase(0, nl + 1);
        if (::write(fd, reply.data(), reply.size()) < 0) break;
      }
    }
    ::close(fd);
  }

  int listen_fd_ = -1;
  int port_ = 0;
  std::thread thread_;
};

TEST(SidecarTcp, EmbedsOverSocket) {
  TcpSidecar server;
  auto provider = make_provider("sidecar:127.0.0.1:" + std::to_string(server.port()));
  std::vector<std::string> texts{"Eiffel Tower", "Eiffel Tower"};
  auto v = provider->embed(texts);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(cosine(v[0], v[1]), 1.0, 1e-6);
  EXPECT_NEAR(norm(v[0]), 1.0, 1e-6);
  EXPECT_EQ(v[0], testing::fake_sidecar_vector("Eiffel Tower"));
  // a second request on the same connection
  EXPECT_EQ(provider->embed(std::vector<std::string>{"x"}).size(), 1u);
}

TEST(SidecarTcp, RefusedConnection) {
  int port;
  {
    TcpSidecar server;  // grab a free port, then close it
    port = server.port();
  }
  EXPECT_THROW(make_provider("sidecar:127.0.0.1:" + std::to_string(port)), TransportError);
  EXPECT_THROW(make_provider("sidecar:no-port"), ConfigError);
}

TEST(SidecarProcess, SpawnedChild) {
  auto provider = make_provider(std::string("sidecar-exec:") + KGVQA_FAKE_SIDECAR_PATH);
  std::vector<std::string> texts{"male", "female", "male"};
  auto v = provider->embed(texts);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NEAR(cosine(v[0], v[2]), 1.0, 1e-6);
  for (const auto& e : v) EXPECT_NEAR(norm(e), 1.0, 1e-6);
}

TEST(SidecarProcess, ChildFaults) {
  for (const char* mode : {"--error", "--short", "--wrong-id", "--garbage", "--exit"}) {
    auto provider = make_provider(std::string("sidecar-exec:") + KGVQA_FAKE_SIDECAR_PATH + " " + mode);
    EXPECT_THROW(provider->embed(std::vector<std::string>{"a", "b"}), TransportError) << mode;
  }
}

TEST(MakeProvider, UnknownSpec) {
  EXPECT_THROW(make_provider("openai"), ConfigError);
  EXPECT_EQ(make_provider("stub")->name(), "stub");
}

}  // namespace
}  // namespace kgvqa
