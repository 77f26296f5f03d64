#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "highlight_forge/geometry.hpp"

namespace {

std::vector<hforge::Detection> random_detections(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> pos(0.0, 600.0), size(5.0, 120.0), conf(0.0, 1.0);
  std::vector<hforge::Detection> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pos(rng), y = pos(rng);
    out.emplace_back(hforge::BoundingBox(x, y, x + size(rng), y + size(rng)),
                     hforge::kAllEventClasses[i % 4], conf(rng));
  }
  return out;
}

void BM_Nms(benchmark::State& state) {
  const auto dets = random_detections(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hforge::nms(dets, 0.7));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Nms)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_Iou(benchmark::State& state) {
  const hforge::BoundingBox a(0, 0, 100, 80), b(30, 20, 140, 90);
  for (auto _ : state) benchmark::DoNotOptimize(hforge::iou(a, b));
}
BENCHMARK(BM_Iou);

}  // namespace
