#include "highlight_forge/sidecar.hpp"

#include <cerrno>
#include <cstring>
#include <filesystem>

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include "json.hpp"

#include "highlight_forge/errors.hpp"
#include "highlight_forge/process.hpp"
#include "highlight_forge/text.hpp"

namespace hforge::sidecar {

using nlohmann::json;

std::string encode_request(std::int64_t id, std::string_view frame_path) {
  nlohmann::ordered_json request;
  request["id"] = id;
  request["frame"] = std::string(frame_path);
  return request.dump();
}

namespace {

double number_field(const json& value, const char* what) {
  if (!value.is_number()) throw ProtocolError(std::string(what) + " is not a number");
  return value.get<double>();
}

Detection decode_detection(const json& item) {
  if (!item.is_object()) throw ProtocolError("detection is not an object");
  const auto label_it = item.find("label");
  const auto conf_it = item.find("confidence");
  const auto box_it = item.find("box");
  if (label_it == item.end() || conf_it == item.end() || box_it == item.end()) {
    throw ProtocolError("detection needs label, confidence and box");
  }
  if (!label_it->is_string()) throw ProtocolError("label is not a string");
  const auto label = try_parse_event_class(label_it->get<std::string>());
  if (!label) throw ProtocolError("unknown label '" + label_it->get<std::string>() + "'");
  const double confidence = number_field(*conf_it, "confidence");
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw ProtocolError("confidence outside [0, 1]");
  }
  if (!box_it->is_array() || box_it->size() != 4) {
    throw ProtocolError("box is not a 4-element array");
  }
  double c[4];
  for (std::size_t k = 0; k < 4; ++k) c[k] = number_field((*box_it)[k], "box coordinate");
  if (!BoundingBox::is_valid(c[0], c[1], c[2], c[3])) {
    throw ProtocolError("box violates x1 < x2, y1 < y2, non-negative");
  }
  return Detection(BoundingBox(c[0], c[1], c[2], c[3]), *label, confidence);
}

}  // namespace

std::vector<Detection> decode_response(std::string_view line, std::int64_t expected_id) {
  json response;
  try {
    response = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!response.is_object()) throw ProtocolError("response is not a JSON object");
  const auto id_it = response.find("id");
  if (id_it == response.end() || !id_it->is_number_integer()) {
    throw ProtocolError("response has no integer id");
  }
  const auto id = id_it->get<std::int64_t>();
  if (id != expected_id) {
    throw ProtocolError("response id " + std::to_string(id) + " does not match request id " +
                        std::to_string(expected_id));
  }
  if (const auto err = response.find("error"); err != response.end()) {
    throw FrameRejected("sidecar error: " + (err->is_string() ? err->get<std::string>()
                                                               : err->dump()));
  }
  const auto dets = response.find("detections");
  if (dets == response.end() || !dets->is_array()) {
    throw ProtocolError("response has no detections array");
  }
  std::vector<Detection> out;
  out.reserve(dets->size());
  for (const auto& item : *dets) out.push_back(decode_detection(item));
  return out;
}

namespace {

class StdioChannel final : public LineChannel {
 public:
  explicit StdioChannel(process::Child child)
      : child_(std::move(child)), reader_(child_.stdout_fd()) {}

  void write_line(std::string_view line) override {
    std::string buf(line);
    buf += '\n';
    process::write_all(child_.stdin_fd(), buf);
  }

  std::optional<std::string> read_line() override { return reader_.read_line(); }

 private:
  process::Child child_;
  process::LineReader reader_;
};

class SocketChannel final : public LineChannel {
 public:
  explicit SocketChannel(int fd) : fd_(fd), reader_(fd) {}
  ~SocketChannel() override { ::close(fd_); }
  SocketChannel(const SocketChannel&) = delete;
  SocketChannel& operator=(const SocketChannel&) = delete;

  void write_line(std::string_view line) override {
    std::string buf(line);
    buf += '\n';
    process::write_all(fd_, buf);
  }

  std::optional<std::string> read_line() override { return reader_.read_line(); }

 private:
  int fd_;
  process::LineReader reader_;
};

}  // namespace

std::unique_ptr<LineChannel> spawn_stdio_channel(const std::vector<std::string>& argv) {
  return std::make_unique<StdioChannel>(process::Child::spawn(argv));
}

std::unique_ptr<LineChannel> connect_unix_channel(const std::string& socket_path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (socket_path.size() >= sizeof(addr.sun_path)) {
    throw ConfigError("socket path too long: " + socket_path);
  }
  std::memcpy(addr.sun_path, socket_path.c_str(), socket_path.size() + 1);
  const int fd = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    const int err = errno;
    ::close(fd);
    throw TransportError("connect " + socket_path + ": " + std::strerror(err));
  }
  return std::make_unique<SocketChannel>(fd);
}

ChannelFactory parse_address(std::string_view address) {
  constexpr std::string_view unix_prefix = "unix:";
  constexpr std::string_view stdio_prefix = "stdio:";
  if (address.substr(0, unix_prefix.size()) == unix_prefix) {
    std::string path(address.substr(unix_prefix.size()));
    if (path.empty()) throw ConfigError("sidecar address 'unix:' needs a socket path");
    return [path] { return connect_unix_channel(path); };
  }
  if (address.substr(0, stdio_prefix.size()) == stdio_prefix) {
    std::vector<std::string> argv;
    for (auto word : text::split(address.substr(stdio_prefix.size()), ' ')) {
      word = text::trim(word);
      if (!word.empty()) argv.emplace_back(word);
    }
    if (argv.empty()) throw ConfigError("sidecar address 'stdio:' needs a command");
    return [argv] { return spawn_stdio_channel(argv); };
  }
  throw ConfigError("sidecar address must start with 'unix:' or 'stdio:', got '" +
                    std::string(address) + "'");
}

std::vector<Detection> SidecarBackend::detect(const FrameRef& frame) {
  if (!channel_) channel_ = connect_();
  const std::int64_t id = next_id_++;
  try {
    channel_->write_line(
        encode_request(id, std::filesystem::absolute(frame.path).lexically_normal().string()));
    auto line = channel_->read_line();
    if (!line) throw TransportError("sidecar closed the stream");
    return decode_response(*line, id);
  } catch (const FrameRejected&) {
    throw;
  } catch (const Error&) {
    // Transport failures and out-of-sync replies both poison the stream.
    channel_.reset();
    throw;
  }
}

}  // namespace hforge::sidecar
