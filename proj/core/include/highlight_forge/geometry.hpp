#pragma once

#include <span>
#include <vector>

#include "highlight_forge/event_class.hpp"

namespace hforge {

/// Axis-aligned box in pixel space, origin at the top-left of the image.
/// Always satisfies 0 <= x1 < x2 and 0 <= y1 < y2 with finite coordinates;
/// the constructor throws GeometryError otherwise.
class BoundingBox {
 public:
  BoundingBox(double x1, double y1, double x2, double y2);

  static bool is_valid(double x1, double y1, double x2, double y2) noexcept;

  double x1() const noexcept { return x1_; }
  double y1() const noexcept { return y1_; }
  double x2() const noexcept { return x2_; }
  double y2() const noexcept { return y2_; }

  double width() const noexcept { return x2_ - x1_; }
  double height() const noexcept { return y2_ - y1_; }
  double area() const noexcept { return width() * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x1_;
  double y1_;
  double x2_;
  double y2_;
};

/// Image size in pixels; both sides >= 1.
class ImageDims {
 public:
  ImageDims(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int min_side() const noexcept { return width_ < height_ ? width_ : height_; }

  bool contains(const BoundingBox& box) const noexcept;

  friend bool operator==(const ImageDims&, const ImageDims&) = default;

 private:
  int width_;
  int height_;
};

/// One detector output: a box, one of the four event classes and a
/// confidence fraction in [0, 1].
struct Detection {
  Detection(BoundingBox box, EventClass label, double confidence);

  BoundingBox box;
  EventClass label;
  double confidence;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct ScalePlan {
  double scale;
  ImageDims source;
  ImageDims new_dims;
};

enum class CoordRounding {
  none,     ///< keep the exact scaled coordinates
  nearest,  ///< round each coordinate half away from zero
};

/// Intersection over union. Boxes that only touch have zero intersection.
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Strict descending-confidence order used by nms(); equal confidences fall
/// back to ascending (x1, y1, x2, y2) and then label.
bool ranks_before(const Detection& a, const Detection& b) noexcept;

/// Greedy class-agnostic non-maximum suppression. Keeps the best remaining
/// detection and drops every other remaining one whose IoU with it is at
/// least `overlap_threshold`. Output is in ranks_before() order.
std::vector<Detection> nms(std::span<const Detection> detections,
                           double overlap_threshold);

/// Mirror a box about the vertical centre line of an image.
BoundingBox horizontal_flip(const BoundingBox& box, const ImageDims& dims);

/// Resize so the shorter side becomes `target_min`, keeping aspect ratio.
ScalePlan resize_min_dim(const ImageDims& dims, int target_min);

/// Map a box from plan.source into plan.new_dims coordinates.
BoundingBox scale_box(const BoundingBox& box, const ScalePlan& plan,
                      CoordRounding rounding = CoordRounding::none);

}  // namespace hforge
