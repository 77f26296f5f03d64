#include "highlight_forge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "highlight_forge/errors.hpp"

namespace hforge {

namespace {

std::string describe(double x1, double y1, double x2, double y2) {
  return "(" + std::to_string(x1) + ", " + std::to_string(y1) + ", " +
         std::to_string(x2) + ", " + std::to_string(y2) + ")";
}

}  // namespace

BoundingBox::BoundingBox(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!is_valid(x1, y1, x2, y2)) {
    throw GeometryError("invalid bounding box " + describe(x1, y1, x2, y2));
  }
}

bool BoundingBox::is_valid(double x1, double y1, double x2, double y2) noexcept {
  const bool finite = std::isfinite(x1) && std::isfinite(y1) &&
                      std::isfinite(x2) && std::isfinite(y2);
  return finite && x1 >= 0 && y1 >= 0 && x1 < x2 && y1 < y2;
}

ImageDims::ImageDims(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw GeometryError("invalid image size " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
}

bool ImageDims::contains(const BoundingBox& box) const noexcept {
  return box.x2() <= width_ && box.y2() <= height_;
}

Detection::Detection(BoundingBox box_, EventClass label_, double confidence_)
    : box(box_), label(label_), confidence(confidence_) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw InvalidArgument("confidence " + std::to_string(confidence) +
                          " outside [0, 1]");
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool ranks_before(const Detection& a, const Detection& b) noexcept {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  const auto key = [](const Detection& d) {
    return std::tuple(d.box.x1(), d.box.y1(), d.box.x2(), d.box.y2(),
                      static_cast<int>(d.label));
  };
  return key(a) < key(b);
}

std::vector<Detection> nms(std::span<const Detection> detections,
                           double overlap_threshold) {
  if (!(overlap_threshold >= 0.0 && overlap_threshold <= 1.0)) {
    throw InvalidArgument("overlap threshold outside [0, 1]");
  }
  std::vector<Detection> ranked(detections.begin(), detections.end());
  std::sort(ranked.begin(), ranked.end(), ranks_before);

  std::vector<Detection> kept;
  kept.reserve(ranked.size());
  for (const Detection& candidate : ranked) {
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
          return iou(k.box, candidate.box) >= overlap_threshold;
        });
    if (!suppressed) kept.push_back(candidate);
  }
  return kept;
}

BoundingBox horizontal_flip(const BoundingBox& box, const ImageDims& dims) {
  if (!dims.contains(box)) {
    throw GeometryError("box " + describe(box.x1(), box.y1(), box.x2(), box.y2()) +
                        " lies outside a " + std::to_string(dims.width()) + "x" +
                        std::to_string(dims.height()) + " image");
  }
  const double w = dims.width();
  return BoundingBox(w - box.x2(), box.y1(), w - box.x1(), box.y2());
}

ScalePlan resize_min_dim(const ImageDims& dims, int target_min) {
  if (target_min < 1) throw InvalidArgument("target_min must be >= 1");
  const double scale = static_cast<double>(target_min) / dims.min_side();
  auto scaled = [scale](int side) {
    return std::max(1, static_cast<int>(std::round(side * scale)));
  };
  int w = scaled(dims.width());
  int h = scaled(dims.height());
  if (dims.width() <= dims.height()) {
    w = target_min;
  } else {
    h = target_min;
  }
  return ScalePlan{scale, dims, ImageDims(w, h)};
}

BoundingBox scale_box(const BoundingBox& box, const ScalePlan& plan,
                      CoordRounding rounding) {
  if (!plan.source.contains(box)) {
    throw GeometryError("box lies outside the plan's source image");
  }
  if (!(plan.scale > 0)) throw InvalidArgument("scale must be positive");
  auto map = [&](double v) {
    const double s = v * plan.scale;
    return rounding == CoordRounding::nearest ? std::round(s) : s;
  };
  const double x1 = map(box.x1()), y1 = map(box.y1());
  const double x2 = map(box.x2()), y2 = map(box.y2());
  if (!BoundingBox::is_valid(x1, y1, x2, y2)) {
    throw GeometryError("scaled box is degenerate " + describe(x1, y1, x2, y2));
  }
  return BoundingBox(x1, y1, x2, y2);
}

}  // namespace hforge
