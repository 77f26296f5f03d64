#include <gtest/gtest.h>

#include <random>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"
#include "highlight_forge/timeline.hpp"
#include "test_support.hpp"

using namespace hforge;
using testing_support::fixture;
using testing_support::read_file;

TEST(FormatRecord, GoldenLines) {
  EXPECT_EQ(format_record({86, {{EventClass::foul, 92.54742860794067}}}),
            "86-\t[('foul', 92.54742860794067)]");
  EXPECT_EQ(format_record({114,
                           {{EventClass::corner_kick, 92.61274933815002},
                            {EventClass::corner_kick, 91.55545830726624}}}),
            "114-\t[('Corner kick', 92.61274933815002), ('Corner kick', 91.55545830726624)]");
  EXPECT_EQ(format_record({0, {{EventClass::penalty_kick, 100.0}}}),
            "0-\t[('penalty kick', 100.0)]");
}

TEST(ParseLine, GoldenLinesAndLenientWhitespace) {
  EXPECT_EQ(parse_line("86-\t[('foul', 92.54742860794067)]"),
            (EventRecord{86, {{EventClass::foul, 92.54742860794067}}}));
  EXPECT_EQ(parse_line("96- [('Corner kick', 91.70153737068176)]"),
            (EventRecord{96, {{EventClass::corner_kick, 91.70153737068176}}}));
  EXPECT_EQ(parse_line("114-  \t[('Corner kick', 92.5),\t('goal', 91.5)]"),
            (EventRecord{114, {{EventClass::corner_kick, 92.5}, {EventClass::goal, 91.5}}}));
}

TEST(ParseLine, Errors) {
  EXPECT_THROW(parse_line("86- []"), ParseError);
  EXPECT_THROW(parse_line("86- [('offside', 95.0)]"), UnknownLabelError);
  try {
    parse_line("86\t[('foul', 92.5)]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 3u);
  }
  for (const char* bad : {"", "-\t[('foul', 9.0)]", "86-\t[('foul', 9.0)", "86-\t[('foul' 9.0)]",
                          "86-\t[('foul', abc)]", "86-\t[('foul', 9.0)] x",
                          "86-\t[('foul', 9.0)]]", "86-\t[(foul, 9.0)]"}) {
    EXPECT_THROW(parse_line(bad), ParseError) << bad;
  }
}

TEST(Timeline, GoldenFileRoundTrips) {
  const std::string golden = read_file(fixture("golden_metadata.tsv"));
  const auto timeline = parse_timeline(golden);
  ASSERT_EQ(timeline.records.size(), 22u);
  EXPECT_EQ(timeline.records[5].events.size(), 2u);
  EXPECT_EQ(format_timeline(timeline), golden);
}

TEST(Timeline, ParseErrorsCarryLineNumbers) {
  try {
    parse_timeline("86-\t[('foul', 92.5)]\n\n84-\t[('foul', 93.5)]\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_timeline("86-\t[('foul', 92.5)]\n88-\t[('foul' 93.5)]\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_TRUE(parse_timeline("").records.empty());
}

TEST(Timeline, RandomRoundTrip) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> pct(90.0, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    EventTimeline timeline;
    Seconds t = 0;
    const auto n = rng() % 15;
    for (std::size_t i = 0; i < n; ++i) {
      t += 1 + static_cast<Seconds>(rng() % 20);
      EventRecord r{t, {}};
      const auto k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) r.events.push_back({kAllEventClasses[rng() % 4], pct(rng)});
      EXPECT_EQ(parse_line(format_record(r)), r);
      timeline.records.push_back(std::move(r));
    }
    const auto text = format_timeline(timeline);
    EXPECT_EQ(parse_timeline(text), timeline);
    EXPECT_EQ(format_timeline(parse_timeline(text)), text);
  }
}

TEST(BuildTimeline, FirstGoldenFrames) {
  const BoundingBox box(0, 0, 10, 10);
  const std::vector<FrameDetections> frames{
      {{"m_84.jpg", 84}, {Detection(box, EventClass::goal, 0.5)}},
      {{"m_86.jpg", 86}, {Detection(box, EventClass::foul, 0.9254742860794067)}},
      {{"m_88.jpg", 88}, {Detection(box, EventClass::foul, 0.9817170500755311)}},
      {{"m_96.jpg", 96}, {Detection(box, EventClass::corner_kick, 0.9170153737068176)}},
  };
  const auto timeline = build_timeline(frames, 0.9);
  ASSERT_EQ(timeline.records.size(), 3u);
  EXPECT_EQ(format_timeline(timeline),
            "86-\t[('foul', 92.54742860794067)]\n"
            "88-\t[('foul', 98.17170500755311)]\n"
            "96-\t[('Corner kick', 91.70153737068176)]\n");
}

TEST(BuildTimeline, EmptyAndDuplicate) {
  const BoundingBox box(0, 0, 10, 10);
  std::vector<FrameDetections> frames{{{"m_0.jpg", 0}, {Detection(box, EventClass::goal, 0.9)}}};
  EXPECT_TRUE(build_timeline(frames, 0.9).records.empty());
  frames.push_back({{"n_0.jpg", 0}, {}});
  EXPECT_THROW(build_timeline(frames, 0.9), InvalidArgument);
}

TEST(BuildTimeline, StoredConfidenceExceedsThreshold) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FrameDetections> frames;
    for (Seconds t = 0; t < 20; t += 2) {
      FrameDetections f{{"v_" + std::to_string(t) + ".jpg", t}, {}};
      for (int k = 0; k < 3; ++k) {
        f.detections.emplace_back(BoundingBox(0, 0, 1, 1), EventClass::foul, conf(rng));
      }
      frames.push_back(std::move(f));
    }
    const double threshold = conf(rng);
    const auto timeline = build_timeline(frames, threshold);
    EXPECT_LE(timeline.records.size(), frames.size());
    for (const auto& r : timeline.records) {
      for (std::size_t i = 0; i < r.events.size(); ++i) {
        EXPECT_GT(r.events[i].confidence_pct / 100, threshold);
        if (i > 0) EXPECT_GE(r.events[i - 1].confidence_pct, r.events[i].confidence_pct);
      }
    }
  }
}
