#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/geometry.hpp"
#include "oracles.hpp"

using namespace hforge;

namespace {

constexpr int kCases = 1000;

BoundingBox random_box(std::mt19937_64& rng, double max_coord = 500.0) {
  std::uniform_real_distribution<double> d(0.0, max_coord);
  for (;;) {
    double a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (a > b) std::swap(a, b);
    if (c > e) std::swap(c, e);
    if (a < b && c < e) return BoundingBox(a, c, b, e);
  }
}

oracle::IBox random_ibox(std::mt19937_64& rng, int max_coord) {
  std::uniform_int_distribution<int> d(0, max_coord);
  for (;;) {
    int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (a > b) std::swap(a, b);
    if (c > e) std::swap(c, e);
    if (a < b && c < e) return {a, c, b, e};
  }
}

BoundingBox to_box(const oracle::IBox& b) {
  return BoundingBox(static_cast<double>(b.x1), static_cast<double>(b.y1),
                     static_cast<double>(b.x2), static_cast<double>(b.y2));
}

}  // namespace

TEST(BoundingBox, RejectsInvalidCorners) {
  EXPECT_THROW(BoundingBox(5, 0, 5, 10), GeometryError);
  EXPECT_THROW(BoundingBox(0, 10, 5, 2), GeometryError);
  EXPECT_THROW(BoundingBox(-1, 0, 5, 10), GeometryError);
  EXPECT_THROW(BoundingBox(0, 0, INFINITY, 10), GeometryError);
  EXPECT_THROW(BoundingBox(0, 0, NAN, 10), GeometryError);
  EXPECT_THROW(ImageDims(0, 10), GeometryError);
  EXPECT_THROW(Detection(BoundingBox(0, 0, 1, 1), EventClass::goal, 1.01), InvalidArgument);
}

TEST(Iou, Examples) {
  EXPECT_EQ(iou(BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 10)), 1.0);
  EXPECT_EQ(iou(BoundingBox(0, 0, 1, 1), BoundingBox(5, 5, 6, 6)), 0.0);
  EXPECT_DOUBLE_EQ(iou(BoundingBox(0, 0, 10, 10), BoundingBox(5, 0, 15, 10)), 50.0 / 150.0);
  // Shared edge only.
  EXPECT_EQ(iou(BoundingBox(0, 0, 10, 10), BoundingBox(10, 0, 20, 10)), 0.0);
}

TEST(Iou, SymmetricBoundedAndIdentity) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < kCases; ++i) {
    const auto a = random_box(rng);
    const auto b = random_box(rng);
    const double ab = iou(a, b);
    EXPECT_EQ(ab, iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(iou(a, a), 1.0);
  }
}

TEST(Iou, MatchesIntegerAreaOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < kCases; ++i) {
    const auto a = random_ibox(rng, 60);
    const auto b = random_ibox(rng, 60);
    const auto inter = oracle::intersection(a, b);
    const auto uni = oracle::area(a) + oracle::area(b) - inter;
    EXPECT_DOUBLE_EQ(iou(to_box(a), to_box(b)),
                     static_cast<double>(inter) / static_cast<double>(uni));
  }
}

TEST(Nms, Examples) {
  const Detection a(BoundingBox(0, 0, 10, 10), EventClass::goal, 0.95);
  const Detection b(BoundingBox(0, 0, 10, 9), EventClass::goal, 0.90);
  const Detection c(BoundingBox(50, 50, 60, 60), EventClass::foul, 0.85);
  const std::vector<Detection> in{c, b, a};
  EXPECT_EQ(nms(in, 0.7), (std::vector<Detection>{a, c}));
  EXPECT_TRUE(nms(std::vector<Detection>{}, 0.7).empty());
  EXPECT_EQ(nms(std::vector<Detection>{b}, 0.0), std::vector<Detection>{b});
  // Nothing coincides exactly, so threshold 1 only sorts.
  EXPECT_EQ(nms(in, 1.0), (std::vector<Detection>{a, b, c}));
  EXPECT_THROW(nms(in, 1.5), InvalidArgument);
}

TEST(Nms, IsClassAgnostic) {
  const Detection a(BoundingBox(0, 0, 10, 10), EventClass::goal, 0.95);
  const Detection b(BoundingBox(0, 0, 10, 10), EventClass::foul, 0.96);
  EXPECT_EQ(nms(std::vector<Detection>{a, b}, 0.7), std::vector<Detection>{b});
}

TEST(Nms, TiesBreakOnCoordinates) {
  const Detection a(BoundingBox(5, 0, 10, 10), EventClass::goal, 0.9);
  const Detection b(BoundingBox(0, 0, 10, 10), EventClass::goal, 0.9);
  EXPECT_EQ(nms(std::vector<Detection>{a, b}, 0.4), std::vector<Detection>{b});
  EXPECT_EQ(nms(std::vector<Detection>{b, a}, 0.4), std::vector<Detection>{b});
}

TEST(Nms, MatchesBruteForceOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> count(0, 20);
  for (int trial = 0; trial < kCases; ++trial) {
    const int n = count(rng);
    std::vector<oracle::IDet> idets;
    std::vector<Detection> dets;
    std::vector<double> confs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) confs[static_cast<std::size_t>(i)] = (i + 1) / 32.0;
    std::shuffle(confs.begin(), confs.end(), rng);
    for (int i = 0; i < n; ++i) {
      const auto box = random_ibox(rng, 40);
      const int label = static_cast<int>(rng() % 4);
      idets.push_back({box, label, confs[static_cast<std::size_t>(i)]});
      dets.emplace_back(to_box(box), static_cast<EventClass>(label),
                        confs[static_cast<std::size_t>(i)]);
    }
    std::vector<Detection> expected;
    for (auto idx : oracle::nms(idets, 7, 10)) expected.push_back(dets[idx]);
    const auto got = nms(dets, 0.7);
    ASSERT_EQ(got, expected) << "trial " << trial;
    EXPECT_EQ(nms(got, 0.7), got);
  }
}

TEST(HorizontalFlip, Examples) {
  const ImageDims dims(100, 50);
  EXPECT_EQ(horizontal_flip(BoundingBox(10, 20, 30, 40), dims), BoundingBox(70, 20, 90, 40));
  EXPECT_EQ(horizontal_flip(BoundingBox(40, 0, 60, 10), dims), BoundingBox(40, 0, 60, 10));
  EXPECT_THROW(horizontal_flip(BoundingBox(90, 0, 110, 10), dims), GeometryError);
  EXPECT_THROW(horizontal_flip(BoundingBox(0, 0, 10, 60), dims), GeometryError);
}

TEST(HorizontalFlip, InvolutionPreservingArea) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> side(1, 2000);
  for (int i = 0; i < kCases; ++i) {
    const auto ib = random_ibox(rng, 1000);
    const ImageDims dims(static_cast<int>(ib.x2) + side(rng) % 500,
                         static_cast<int>(ib.y2) + side(rng) % 500);
    const auto box = to_box(ib);
    const auto once = horizontal_flip(box, dims);
    EXPECT_TRUE(dims.contains(once));
    EXPECT_EQ(once.area(), box.area());
    EXPECT_EQ(horizontal_flip(once, dims), box);
  }
}

TEST(ResizeMinDim, Examples) {
  auto p = resize_min_dim(ImageDims(600, 400), 300);
  EXPECT_EQ(p.scale, 0.75);
  EXPECT_EQ(p.new_dims, ImageDims(450, 300));
  p = resize_min_dim(ImageDims(300, 300), 300);
  EXPECT_EQ(p.scale, 1.0);
  EXPECT_EQ(p.new_dims, ImageDims(300, 300));
  p = resize_min_dim(ImageDims(400, 600), 300);
  EXPECT_EQ(p.new_dims, ImageDims(300, 450));
  EXPECT_THROW(resize_min_dim(ImageDims(10, 10), 0), InvalidArgument);
}

TEST(ResizeMinDim, MinSideExactAspectWithinOneUnit) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> side(1, 4000);
  std::uniform_int_distribution<int> target(1, 1200);
  for (int i = 0; i < kCases; ++i) {
    const ImageDims dims(side(rng), side(rng));
    const int t = target(rng);
    const auto plan = resize_min_dim(dims, t);
    EXPECT_EQ(plan.new_dims.min_side(), t);
    EXPECT_EQ(plan.source, dims);
    // Long side against the exact rational target long * t / short.
    const bool wide = dims.width() > dims.height();
    const double exact_long =
        static_cast<double>(wide ? dims.width() : dims.height()) * t / dims.min_side();
    const int got_long = wide ? plan.new_dims.width() : plan.new_dims.height();
    EXPECT_LE(std::abs(got_long - exact_long), 1.0) << dims.width() << "x" << dims.height();
  }
}

TEST(ScaleBox, Examples) {
  const auto plan = resize_min_dim(ImageDims(400, 400), 300);
  EXPECT_EQ(scale_box(BoundingBox(100, 100, 200, 200), plan), BoundingBox(75, 75, 150, 150));
  const auto same = resize_min_dim(ImageDims(50, 80), 50);
  EXPECT_EQ(scale_box(BoundingBox(1.5, 2, 3, 4), same), BoundingBox(1.5, 2, 3, 4));
  const ScalePlan tiny{0.1, ImageDims(40, 40), ImageDims(4, 4)};
  EXPECT_THROW(scale_box(BoundingBox(0, 0, 4, 4), tiny, CoordRounding::nearest), GeometryError);
  EXPECT_THROW(scale_box(BoundingBox(0, 0, 500, 4), plan), GeometryError);
}
