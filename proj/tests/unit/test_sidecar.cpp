#include <gtest/gtest.h>

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cstring>
#include <thread>

#include "json.hpp"

#include "highlight_forge/errors.hpp"
#include "highlight_forge/process.hpp"
#include "highlight_forge/sidecar.hpp"
#include "test_support.hpp"

using namespace hforge;
using namespace hforge::sidecar;
using testing_support::TempDir;

namespace {

const std::string kFixture = testing_support::fixture("golden_fixture.tsv").string();

ChannelFactory stdio(const std::string& mode) {
  return parse_address("stdio:" + std::string(HFORGE_FAKE_SIDECAR) + " " + mode + " " + kFixture);
}

FrameRef frame(Seconds t) { return FrameRef{"frames/match_" + std::to_string(t) + ".jpg", t}; }

/// One-connection Unix socket server answering each request with an empty
/// detection list, echoing ids.
class EchoServer {
 public:
  explicit EchoServer(std::string path) : path_(std::move(path)) {
    listen_fd_ = ::socket(AF_UNIX, SOCK_STREAM, 0);
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    std::strncpy(addr.sun_path, path_.c_str(), sizeof(addr.sun_path) - 1);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listen_fd_, 1) != 0) {
      throw std::runtime_error("cannot listen on " + path_);
    }
    thread_ = std::thread([this] { serve(); });
  }
  ~EchoServer() {
    join();
    ::close(listen_fd_);
  }

  void join() {
    if (thread_.joinable()) thread_.join();
  }
  EchoServer(const EchoServer&) = delete;
  EchoServer& operator=(const EchoServer&) = delete;

  std::vector<std::string> requests;

 private:
  void serve() {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) return;
    process::LineReader reader(fd);
    while (auto line = reader.read_line()) {
      requests.push_back(*line);
      const auto id = nlohmann::json::parse(*line).at("id").get<long long>();
      process::write_all(fd, "{\"id\":" + std::to_string(id) + ",\"detections\":[]}\n");
    }
    ::close(fd);
  }

  std::string path_;
  int listen_fd_ = -1;
  std::thread thread_;
};

}  // namespace

TEST(Protocol, EncodeRequest) {
  EXPECT_EQ(encode_request(7, "work/frames/match_86.jpg"),
            R"({"id":7,"frame":"work/frames/match_86.jpg"})");
}

TEST(Protocol, DecodeResponse) {
  const auto dets = decode_response(
      R"({"id":7,"detections":[{"label":"foul","confidence":0.925,"box":[1,2,3,4]}]})", 7);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0], Detection(BoundingBox(1, 2, 3, 4), EventClass::foul, 0.925));
  EXPECT_TRUE(decode_response(R"({"id":1,"detections":[]})", 1).empty());
  EXPECT_EQ(decode_response(R"({"id":1,"detections":[{"label":"CORNER KICK","confidence":1,)"
                            R"("box":[0,0,1,1]}]})",
                            1)[0]
                .label,
            EventClass::corner_kick);
}

TEST(Protocol, DecodeRejectsContractViolations) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"detections":[]})",
      R"({"id":"7","detections":[]})",
      R"({"id":8,"detections":[]})",
      R"({"id":7})",
      R"({"id":7,"detections":{}})",
      R"({"id":7,"detections":[{"label":"offside","confidence":0.5,"box":[0,0,1,1]}]})",
      R"({"id":7,"detections":[{"label":"goal","confidence":1.5,"box":[0,0,1,1]}]})",
      R"({"id":7,"detections":[{"label":"goal","confidence":0.5,"box":[0,0,1]}]})",
      R"({"id":7,"detections":[{"label":"goal","confidence":0.5,"box":[3,0,1,1]}]})",
      R"({"id":7,"detections":[{"label":"goal","box":[0,0,1,1]}]})",
  };
  for (const char* line : bad) EXPECT_THROW(decode_response(line, 7), ProtocolError) << line;
  EXPECT_THROW(decode_response(R"({"id":7,"detections":[],"error":"unreadable"})", 7),
               FrameRejected);
}

TEST(Address, Parsing) {
  EXPECT_THROW(parse_address("tcp:localhost:1"), ConfigError);
  EXPECT_THROW(parse_address("unix:"), ConfigError);
  EXPECT_THROW(parse_address("stdio:   "), ConfigError);
  EXPECT_NO_THROW(parse_address("unix:/tmp/x.sock"));
}

TEST(SidecarBackend, StdioRoundTripFromFixtureTable) {
  SidecarBackend backend(stdio("ok"));
  const auto d86 = backend.detect(frame(86));
  ASSERT_EQ(d86.size(), 1u);
  EXPECT_EQ(d86[0].confidence, 0.9254742860794067);
  EXPECT_EQ(backend.detect(frame(114)).size(), 2u);
  EXPECT_TRUE(backend.detect(frame(1)).empty());
}

TEST(SidecarBackend, SoakKeepsIdsInStep) {
  SidecarBackend backend(stdio("ok"));
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(backend.detect(frame(86)).size(), 1u);
  }
}

TEST(SidecarBackend, ProtocolViolations) {
  SidecarBackend garbage(stdio("garbage"));
  EXPECT_THROW(garbage.detect(frame(86)), ProtocolError);
  SidecarBackend wrong_id(stdio("wrong-id"));
  EXPECT_THROW(wrong_id.detect(frame(86)), ProtocolError);
  SidecarBackend error(stdio("error"));
  EXPECT_THROW(error.detect(frame(86)), FrameRejected);
  // The channel survives a rejected frame.
  EXPECT_THROW(error.detect(frame(86)), FrameRejected);
}

TEST(SidecarBackend, ReconnectsAfterPeerDies) {
  SidecarBackend backend(stdio("die-after=1"));
  EXPECT_EQ(backend.detect(frame(86)).size(), 1u);
  EXPECT_THROW(backend.detect(frame(86)), TransportError);
  // A fresh process answers again.
  EXPECT_EQ(backend.detect(frame(86)).size(), 1u);
}

TEST(SidecarBackend, MissingProgramIsAnError) {
  SidecarBackend backend(parse_address("stdio:/nonexistent/hforge-model"));
  EXPECT_THROW(backend.detect(frame(86)), Error);
}

TEST(SidecarBackend, UnixSocket) {
  TempDir dir;
  const auto path = (dir / "model.sock").string();
  {
    EchoServer server(path);
    SidecarBackend backend(parse_address("unix:" + path));
    EXPECT_TRUE(backend.detect(frame(2)).empty());
    EXPECT_TRUE(backend.detect(frame(4)).empty());
    backend = SidecarBackend(parse_address("unix:" + path));  // closes the connection
    server.join();
    ASSERT_EQ(server.requests.size(), 2u);
    const auto second = nlohmann::json::parse(server.requests[1]);
    EXPECT_EQ(second.at("id").get<int>(), 2);
    const std::string sent = second.at("frame").get<std::string>();
    EXPECT_EQ(sent.front(), '/');
    EXPECT_NE(sent.find("frames/match_4.jpg"), std::string::npos);
  }
  SidecarBackend nobody(parse_address("unix:" + path));
  EXPECT_THROW(nobody.detect(frame(2)), TransportError);
}

TEST(DetectAll, SkipsRejectedFramesThroughSidecar) {
  TempDir dir;
  testing_support::write_file(dir / "match_86.jpg", "");
  const std::vector<FrameRef> frames{{dir / "match_86.jpg", 86}};
  const auto run = detect_all(frames, [] { return std::make_unique<SidecarBackend>(stdio("error")); },
                              find_profile("frcnn-vgg16"));
  EXPECT_TRUE(run.frames.empty());
  ASSERT_EQ(run.skipped.size(), 1u);
}
