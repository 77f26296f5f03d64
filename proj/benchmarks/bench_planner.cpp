#include <benchmark/benchmark.h>

#include <random>

#include "highlight_forge/clip_planner.hpp"

namespace {

hforge::EventTimeline timeline_of(std::size_t records) {
  std::mt19937_64 rng(records);
  hforge::EventTimeline timeline;
  hforge::Seconds t = 0;
  for (std::size_t i = 0; i < records; ++i) {
    t += 2 + static_cast<hforge::Seconds>(rng() % 30);
    timeline.records.push_back({t, {{hforge::kAllEventClasses[rng() % 4], 90.0 + (rng() % 1000) / 100.0}}});
  }
  return timeline;
}

void BM_MergeWindows(benchmark::State& state) {
  const auto timeline = timeline_of(static_cast<std::size_t>(state.range(0)));
  const auto duration = timeline.records.back().timestamp_s + 10;
  for (auto _ : state) benchmark::DoNotOptimize(hforge::merge_windows(timeline, {}, duration));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MergeWindows)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

}  // namespace
