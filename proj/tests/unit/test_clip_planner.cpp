#include <gtest/gtest.h>

#include <random>

#include "highlight_forge/clip_planner.hpp"
#include "highlight_forge/errors.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hforge;

namespace {

EventTimeline golden_timeline() {
  return parse_timeline(testing_support::read_file(testing_support::fixture("golden_metadata.tsv")));
}

EventTimeline random_timeline(std::mt19937_64& rng, Seconds duration, std::size_t max_events) {
  std::vector<Seconds> ts;
  const auto n = rng() % (max_events + 1);
  for (std::size_t i = 0; i < n; ++i) ts.push_back(static_cast<Seconds>(rng() % (duration + 1)));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::uniform_real_distribution<double> pct(90.0, 100.0);
  EventTimeline timeline;
  for (Seconds t : ts) {
    EventRecord r{t, {{kAllEventClasses[rng() % 4], pct(rng)}}};
    if (rng() % 5 == 0) r.events.push_back({kAllEventClasses[rng() % 4], 90.5});
    timeline.records.push_back(std::move(r));
  }
  return timeline;
}

}  // namespace

TEST(PadEvent, Examples) {
  const PlannerConfig cfg;
  EXPECT_EQ(pad_event(86, cfg, 1380), (std::pair<Seconds, Seconds>{81, 91}));
  EXPECT_EQ(pad_event(2, cfg, 1380).first, 0);
  EXPECT_EQ(pad_event(1380, cfg, 1380).second, 1380);
  EXPECT_THROW(pad_event(1381, cfg, 1380), InvalidArgument);
  EXPECT_THROW(pad_event(5, PlannerConfig{0, 0, 0}, 10), InvalidArgument);
  EXPECT_THROW(pad_event(5, PlannerConfig{-1, 5, 0}, 10), InvalidArgument);
}

TEST(PadEvent, CollapsedWindowsWidenInward) {
  EXPECT_EQ(pad_event(0, PlannerConfig{3, 0, 0}, 10), (std::pair<Seconds, Seconds>{0, 1}));
  EXPECT_EQ(pad_event(10, PlannerConfig{0, 3, 0}, 10), (std::pair<Seconds, Seconds>{9, 10}));
}

TEST(MergeWindows, GoldenExamples) {
  const auto all = golden_timeline();
  const EventTimeline first_two{{all.records[0], all.records[1]}};
  const auto cut = merge_windows(first_two, {}, 1380);
  ASSERT_EQ(cut.clips.size(), 1u);
  EXPECT_EQ(cut.clips[0].start_s, 81);
  EXPECT_EQ(cut.clips[0].end_s, 93);
  EXPECT_EQ(cut.clips[0].overlay,
            (SourceEvent{88, EventClass::foul, 98.17170500755311}));
  EXPECT_EQ(cut.clips[0].source_events.size(), 2u);

  const EventTimeline at_174{{all.records[7]}};
  const auto single = merge_windows(at_174, {}, 1380);
  ASSERT_EQ(single.clips.size(), 1u);
  EXPECT_EQ(single.clips[0].start_s, 169);
  EXPECT_EQ(single.clips[0].end_s, 179);
  EXPECT_EQ(single.clips[0].overlay.confidence_pct, 97.12415933609009);

  EXPECT_TRUE(merge_windows({}, {}, 1380).clips.empty());
}

TEST(MergeWindows, WholeGoldenFile) {
  const auto cut = merge_windows(golden_timeline(), {}, 1380);
  std::vector<std::pair<Seconds, Seconds>> spans;
  for (const auto& c : cut.clips) spans.emplace_back(c.start_s, c.end_s);
  const std::vector<std::pair<Seconds, Seconds>> expected{
      {81, 103},  {107, 121}, {169, 179}, {193, 203}, {217, 227}, {233, 243},
      {305, 317}, {331, 361}, {367, 385}, {407, 417}, {433, 447}};
  EXPECT_EQ(spans, expected);
  EXPECT_EQ(total_highlight_duration(cut), 160);

  std::vector<Seconds> ts;
  for (const auto& r : golden_timeline().records) ts.push_back(r.timestamp_s);
  const auto oracle_clips = oracle::interval_union(ts, 5, 5, 0, 1380);
  ASSERT_EQ(spans.size(), oracle_clips.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    EXPECT_EQ(spans[i].first, oracle_clips[i].start);
    EXPECT_EQ(spans[i].second, oracle_clips[i].end);
  }
  // Second 114 holds two corner kicks, but the foul at 112 outranks both.
  EXPECT_EQ(cut.clips[1].overlay, (SourceEvent{112, EventClass::foul, 97.26079106330872}));
}

TEST(MergeWindows, OverlayTieGoesToEarliest) {
  const EventTimeline timeline{{{10, {{EventClass::goal, 95.0}}},
                                {12, {{EventClass::foul, 95.0}}}}};
  const auto cut = merge_windows(timeline, {}, 100);
  ASSERT_EQ(cut.clips.size(), 1u);
  EXPECT_EQ(cut.clips[0].overlay, (SourceEvent{10, EventClass::goal, 95.0}));
}

TEST(MergeWindows, MergeGap) {
  const EventTimeline timeline{{{10, {{EventClass::goal, 95.0}}},
                                {23, {{EventClass::foul, 96.0}}}}};
  EXPECT_EQ(merge_windows(timeline, {5, 5, 0}, 100).clips.size(), 2u);
  EXPECT_EQ(merge_windows(timeline, {5, 5, 2}, 100).clips.size(), 2u);
  EXPECT_EQ(merge_windows(timeline, {5, 5, 3}, 100).clips.size(), 1u);
}

TEST(MergeWindows, MatchesIntervalUnionOracle) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 500; ++trial) {
    const Seconds duration = 1 + static_cast<Seconds>(rng() % 600);
    const PlannerConfig cfg{static_cast<Seconds>(rng() % 12), static_cast<Seconds>(rng() % 12),
                            static_cast<Seconds>(rng() % 6)};
    if (cfg.lead_s + cfg.tail_s == 0) continue;
    const auto timeline = random_timeline(rng, duration, 100);
    const auto cut = merge_windows(timeline, cfg, duration);

    std::vector<Seconds> ts;
    for (const auto& r : timeline.records) ts.push_back(r.timestamp_s);
    const auto expected =
        oracle::interval_union(ts, cfg.lead_s, cfg.tail_s, cfg.merge_gap_s, duration);
    ASSERT_EQ(cut.clips.size(), expected.size()) << "trial " << trial;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(cut.clips[i].start_s, expected[i].start);
      EXPECT_EQ(cut.clips[i].end_s, expected[i].end);
      if (i > 0) EXPECT_LT(cut.clips[i - 1].end_s + cfg.merge_gap_s, cut.clips[i].start_s);
    }
    for (const auto& r : timeline.records) {
      int holders = 0;
      for (const auto& c : cut.clips) holders += c.start_s <= r.timestamp_s && r.timestamp_s <= c.end_s;
      EXPECT_EQ(holders, 1);
    }
    EXPECT_LE(total_highlight_duration(cut), duration);
  }
}

TEST(MergeWindows, WiderPaddingNeverShrinksCoverage) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const auto timeline = random_timeline(rng, 300, 40);
    const PlannerConfig narrow{2, 2, 0};
    const PlannerConfig wide{2 + static_cast<Seconds>(rng() % 5), 2 + static_cast<Seconds>(rng() % 5), 0};
    const auto a = merge_windows(timeline, narrow, 300);
    const auto b = merge_windows(timeline, wide, 300);
    EXPECT_LE(total_highlight_duration(a), total_highlight_duration(b));
    EXPECT_LE(b.clips.size(), a.clips.size());
  }
}

TEST(TotalDuration, Examples) {
  CutList cut{{ClipWindow{81, 93, {}, {}}, ClipWindow{169, 179, {}, {}}}, 1380};
  EXPECT_EQ(total_highlight_duration(cut), 22);
  EXPECT_EQ(total_highlight_duration(CutList{}), 0);
  const EventTimeline one{{{5, {{EventClass::goal, 99.0}}}}};
  EXPECT_EQ(total_highlight_duration(merge_windows(one, {10, 10, 0}, 8)), 8);
}

TEST(CutListJson, RoundTripAndValidation) {
  const auto cut = merge_windows(golden_timeline(), {}, 1380);
  EXPECT_EQ(cutlist_from_json(cutlist_to_json(cut)), cut);
  EXPECT_THROW(cutlist_from_json("{"), ParseError);
  EXPECT_THROW(cutlist_from_json(R"({"clips":[{"start_s":5,"end_s":3,"label":"goal",)"
                                 R"("confidence_pct":95.0,"events":[]}],"video_duration_s":10})"),
               InvalidArgument);
}
