#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "highlight_forge/frame_sampler.hpp"
#include "highlight_forge/geometry.hpp"

namespace hforge {

/// Shorter image side is resized to this many pixels before inference.
struct MinDimInput {
  int pixels;
};

/// Image is reshaped to exactly this size before inference.
struct FixedInput {
  ImageDims dims;
};

/// Thresholds and input sizing for one detector variant.
struct BackendProfile {
  std::string name;
  double box_confidence_threshold;
  double overlap_threshold;
  std::variant<MinDimInput, FixedInput> input;
};

/// Profiles shipped with the tool:
///   frcnn-vgg16            conf 0.9, overlap 0.7, shorter side 300 px
///   frcnn-resnet50         conf 0.6, overlap 0.7, fixed 320x320
///   frcnn-resnet50-strict  conf 0.8, otherwise as frcnn-resnet50
///   fixture                conf 0.9, overlap 0.7, shorter side 300 px
std::vector<BackendProfile> builtin_profiles();

/// Throws ConfigError for names not in builtin_profiles().
BackendProfile find_profile(std::string_view name);

/// Detections for one frame, best first.
struct FrameDetections {
  FrameRef frame;
  std::vector<Detection> detections;

  friend bool operator==(const FrameDetections&, const FrameDetections&) = default;
};

/// Source of raw (pre-threshold, pre-NMS) detections for a frame.
/// Implementations may throw TransportError (retryable) or ProtocolError.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  virtual std::vector<Detection> detect(const FrameRef& frame) = 0;
};

using BackendFactory = std::function<std::unique_ptr<DetectorBackend>()>;

/// Frame file name -> scripted detections. Text form, one detection per
/// tab-separated line:
///
///   <frame name> TAB <label> TAB <confidence> TAB <x1> TAB <y1> TAB <x2> TAB <y2>
///
/// A line holding only a frame name declares a frame with no detections.
/// '#' starts a comment line.
using FixtureTable = std::map<std::string, std::vector<Detection>, std::less<>>;

FixtureTable parse_fixture_table(std::string_view text);
std::string format_fixture_table(const FixtureTable& table);

/// Deterministic backend that answers from a FixtureTable, keyed by the
/// file-name component of the frame path. Unknown frames yield nothing.
class FixtureBackend final : public DetectorBackend {
 public:
  explicit FixtureBackend(std::shared_ptr<const FixtureTable> table)
      : table_(std::move(table)) {}

  std::vector<Detection> detect(const FrameRef& frame) override;

 private:
  std::shared_ptr<const FixtureTable> table_;
};

/// Runs the backend on one frame, drops boxes under the profile's box
/// confidence, then applies nms() at the profile's overlap threshold.
/// Throws InvalidArgument if the frame file does not exist.
FrameDetections detect_frame(DetectorBackend& backend, const BackendProfile& profile,
                             const FrameRef& frame);

/// Keeps detections whose confidence is strictly greater than `threshold`.
FrameDetections filter_confident(const FrameDetections& frame, double threshold);

struct SkippedFrame {
  FrameRef frame;
  std::string reason;
};

struct DetectionRun {
  std::vector<FrameDetections> frames;  ///< successful frames, input order
  std::vector<SkippedFrame> skipped;
};

struct DetectOptions {
  int workers = 1;
  int max_attempts = 3;  ///< per frame, for transport failures only
  std::function<void(const std::string&)> on_warning;
};

/// Detects over every frame with up to `workers` threads, each owning a
/// backend built by `factory`. A frame that keeps failing is skipped and
/// listed in DetectionRun::skipped rather than aborting the run.
DetectionRun detect_all(const std::vector<FrameRef>& frames, const BackendFactory& factory,
                        const BackendProfile& profile, const DetectOptions& options = {});

}  // namespace hforge
