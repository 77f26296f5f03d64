#include <benchmark/benchmark.h>

#include <random>

#include "highlight_forge/timeline.hpp"

namespace {

hforge::EventTimeline timeline_of(std::size_t records) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pct(90.0, 100.0);
  hforge::EventTimeline timeline;
  for (std::size_t i = 0; i < records; ++i) {
    timeline.records.push_back({static_cast<hforge::Seconds>(2 * i),
                                {{hforge::kAllEventClasses[i % 4], pct(rng)}}});
  }
  return timeline;
}

void BM_FormatTimeline(benchmark::State& state) {
  const auto timeline = timeline_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hforge::format_timeline(timeline));
}
BENCHMARK(BM_FormatTimeline)->Arg(22)->Arg(2700);

void BM_ParseTimeline(benchmark::State& state) {
  const auto text = hforge::format_timeline(timeline_of(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(hforge::parse_timeline(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseTimeline)->Arg(22)->Arg(2700);

}  // namespace
