#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "highlight_forge/detector.hpp"
#include "highlight_forge/errors.hpp"

// Client side of the model sidecar protocol: newline-delimited JSON, one
// response line per request line, ids echoed back.
//
//   request:  {"id":7,"frame":"work/frames/match_86.jpg"}
//   response: {"id":7,"detections":[{"label":"foul","confidence":0.925,"box":[x1,y1,x2,y2]}]}
//
// A response may carry an "error" string (with empty detections) when the
// sidecar could not read the frame.
namespace hforge::sidecar {

/// The sidecar answered in sync but could not process the frame.
class FrameRejected : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

std::string encode_request(std::int64_t id, std::string_view frame_path);

/// Validates one response line against the request id. Throws ProtocolError
/// on anything that is not a well-formed matching response, and
/// FrameRejected when the response carries an "error" field.
std::vector<Detection> decode_response(std::string_view line, std::int64_t expected_id);

/// A bidirectional line stream to a sidecar.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// Sends `line` plus '\n'. Throws TransportError.
  virtual void write_line(std::string_view line) = 0;
  /// nullopt when the peer closed the stream. Throws TransportError.
  virtual std::optional<std::string> read_line() = 0;
};

using ChannelFactory = std::function<std::unique_ptr<LineChannel>()>;

/// Starts `argv` and talks to it over its stdin/stdout.
std::unique_ptr<LineChannel> spawn_stdio_channel(const std::vector<std::string>& argv);

/// Connects to a listening Unix-domain stream socket.
std::unique_ptr<LineChannel> connect_unix_channel(const std::string& socket_path);

/// "unix:<socket path>" or "stdio:<program> [args...]" (arguments split on
/// whitespace). Throws ConfigError for anything else.
ChannelFactory parse_address(std::string_view address);

/// DetectorBackend over a LineChannel. The channel is opened lazily and
/// dropped after any transport or protocol failure, so the next call
/// reconnects.
class SidecarBackend final : public DetectorBackend {
 public:
  explicit SidecarBackend(ChannelFactory connect) : connect_(std::move(connect)) {}

  std::vector<Detection> detect(const FrameRef& frame) override;

 private:
  ChannelFactory connect_;
  std::unique_ptr<LineChannel> channel_;
  std::int64_t next_id_ = 1;
};

}  // namespace hforge::sidecar
