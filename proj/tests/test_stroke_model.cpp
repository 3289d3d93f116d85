#include <gtest/gtest.h>

#include <random>

#include "inkscreen/error.hpp"
#include "inkscreen/stroke_model.hpp"
#include "support/fixtures.hpp"

using namespace inkscreen;
using fixtures::down;
using fixtures::up;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_session(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error for: " << text;
  return ErrorCode::Io;
}

std::string one_task(const std::string& samples, const std::string& task = "TMT_A") {
  return R"({"session_id":"s1","subject":null,"tasks":[{"task":")" + task + R"(","samples":[)" + samples + "]}]}";
}

}  // namespace

TEST(Segmentation, DownUpDownGivesTwoStrokesAndOnePause) {
  std::vector<PenSample> s;
  for (double t : {0, 10, 20, 30, 40}) s.push_back(down(t, t, 0));
  for (double t = 50; t <= 150; t += 10) s.push_back(up(t));
  for (double t : {160, 170, 180, 190, 200}) s.push_back(down(t, t, 0));
  const Segmentation seg = segment_strokes(s);
  ASSERT_EQ(seg.strokes.size(), 2u);
  ASSERT_EQ(seg.pauses.size(), 1u);
  EXPECT_DOUBLE_EQ(seg.pauses[0].duration, 0.120);
  EXPECT_DOUBLE_EQ(seg.strokes[0].duration, 0.040);
  EXPECT_DOUBLE_EQ(seg.strokes[0].path_length, 40.0);
}

TEST(Segmentation, AllDownIsOneStroke) {
  std::vector<PenSample> s;
  for (int i = 0; i < 6; ++i) s.push_back(down(i * 5.0, 0, i * 1.0));
  const Segmentation seg = segment_strokes(s);
  EXPECT_EQ(seg.strokes.size(), 1u);
  EXPECT_TRUE(seg.pauses.empty());
}

TEST(Segmentation, AlternationDDUDD) {
  const std::vector<PenSample> s = {down(0, 0, 0), down(1, 1, 0), up(2), down(3, 2, 0), down(4, 3, 0)};
  const Segmentation seg = segment_strokes(s);
  EXPECT_EQ(seg.strokes.size(), 2u);
  EXPECT_EQ(seg.pauses.size(), 1u);
  EXPECT_FALSE(seg.strokes[0].derivative_eligible());
}

TEST(Segmentation, PathLengthIsSumOfSegmentLengths) {
  const std::vector<PenSample> s = {down(0, 0, 0), down(10, 3, 4), down(20, 3, 10)};
  const Segmentation seg = segment_strokes(s);
  ASSERT_EQ(seg.strokes.size(), 1u);
  EXPECT_DOUBLE_EQ(seg.strokes[0].path_length, 11.0);
  EXPECT_DOUBLE_EQ(seg.strokes[0].duration, 0.020);
}

TEST(Segmentation, PropertiesOnRandomRecordings) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto samples = fixtures::random_samples(rng);
    const Segmentation seg = segment_strokes(samples);
    // Pauses are one fewer than strokes.
    ASSERT_EQ(seg.pauses.size() + 1, seg.strokes.size());
    for (const Pause& p : seg.pauses) EXPECT_GT(p.duration, 0.0);
    // Concatenated stroke samples reproduce the pen-down subsequence.
    std::vector<PenSample> rebuilt, pen_down;
    for (const Stroke& st : seg.strokes) rebuilt.insert(rebuilt.end(), st.samples.begin(), st.samples.end());
    for (const PenSample& p : samples) {
      if (p.pen_down) pen_down.push_back(p);
    }
    EXPECT_EQ(rebuilt, pen_down);
  }
}

TEST(ParseSession, MinimalTmtAFile) {
  const std::string text = one_task(fixtures::sample_json(0, 0.5, true) + "," + fixtures::sample_json(10, 0.5, true) +
                                    "," + fixtures::sample_json(20, 0.5, true));
  const DrawingSession s = parse_session(text);
  ASSERT_EQ(s.recordings.size(), 1u);
  EXPECT_EQ(s.recordings[0].task(), TaskKind::TmtA);
  EXPECT_EQ(s.recordings[0].strokes().size(), 1u);
  EXPECT_TRUE(s.recordings[0].pauses().empty());
  EXPECT_EQ(s.session_id, "s1");
  EXPECT_FALSE(s.subject.has_value());
}

TEST(ParseSession, RejectsOutOfRangePressure) {
  EXPECT_EQ(parse_error(one_task(fixtures::sample_json(0, 1.5, true))), ErrorCode::RangeViolation);
}

TEST(ParseSession, RejectsRepeatedTimestamp) {
  const std::string samples = fixtures::sample_json(0, 0.5, true) + "," + fixtures::sample_json(10, 0.5, true) + "," +
                              fixtures::sample_json(10, 0.5, true);
  EXPECT_EQ(parse_error(one_task(samples)), ErrorCode::NonMonotonicTime);
}

TEST(ParseSession, OtherValidationErrors) {
  EXPECT_EQ(parse_error("not json"), ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error("[]"), ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(R"({"session_id":"x","tasks":[]})"), ErrorCode::EmptySession);
  EXPECT_EQ(parse_error(one_task(fixtures::sample_json(0, 0.5, true), "DRAW")), ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(one_task(fixtures::sample_json(-1, 0.5, true))), ErrorCode::RangeViolation);
  EXPECT_EQ(parse_error(one_task(fixtures::sample_json(0, 0.5, false))), ErrorCode::RangeViolation);
  EXPECT_EQ(parse_error(one_task(R"({"t":0,"x":1,"y":2,"p":0.5,"tx":95,"ty":0,"d":true})")),
            ErrorCode::RangeViolation);
  EXPECT_EQ(parse_error(one_task(R"({"t":0,"x":1,"y":2,"p":0.5,"tx":0,"d":true})")), ErrorCode::MalformedInput);
  const std::string dup = R"({"session_id":"x","tasks":[{"task":"CDT","samples":[]},{"task":"CDT","samples":[]}]})";
  EXPECT_EQ(parse_error(dup), ErrorCode::MalformedInput);
  const std::string bad_mmse =
      R"({"session_id":"x","subject":{"diagnosis":"CN","mmse":31,"mtl_atrophy_z":0},"tasks":[{"task":"CDT","samples":[]}]})";
  EXPECT_EQ(parse_error(bad_mmse), ErrorCode::RangeViolation);
}

TEST(ParseSession, UnknownFieldsIgnoredAndSubjectRead) {
  const std::string text =
      R"({"session_id":"a","extra":1,"subject":{"diagnosis":"MCI","mmse":26,"mtl_atrophy_z":1.25},)"
      R"("tasks":[{"task":"CDT","note":"x","samples":[{"t":0,"x":0,"y":0,"p":0.2,"tx":1,"ty":2,"d":true,"z":9}]}]})";
  const DrawingSession s = parse_session(text);
  ASSERT_TRUE(s.subject.has_value());
  EXPECT_EQ(s.subject->diagnosis, Diagnosis::MCI);
  EXPECT_EQ(s.subject->mmse, 26);
  EXPECT_DOUBLE_EQ(*s.subject->mtl_atrophy_z, 1.25);
}

TEST(ParseSession, SerializeRoundTripIsIdempotent) {
  std::mt19937_64 rng(5);
  DrawingSession s;
  s.session_id = "round";
  s.subject = SubjectRecord{Diagnosis::Dementia, 19, 2.75};
  s.recordings.emplace_back(TaskKind::Pentagon, fixtures::random_samples(rng));
  s.recordings.emplace_back(TaskKind::Cdt, fixtures::random_samples(rng));
  const std::string once = serialize_session(s);
  const DrawingSession back = parse_session(once);
  EXPECT_EQ(serialize_session(back), once);
  ASSERT_EQ(back.recordings.size(), 2u);
  EXPECT_EQ(back.recordings[1].samples(), s.recordings[1].samples());
  EXPECT_EQ(back.recordings[1].strokes().size(), s.recordings[1].strokes().size());
}

TEST(ValidateSession, ReportsMissingZeroStrokeAndIneligible) {
  DrawingSession full;
  for (TaskKind t : kAllTasks) {
    full.recordings.emplace_back(t, std::vector<PenSample>{down(0, 0, 0), down(5, 1, 0), down(10, 2, 0)});
  }
  EXPECT_TRUE(validate_session(full).empty());

  DrawingSession partial;
  for (TaskKind t : {TaskKind::Sentence, TaskKind::Pentagon, TaskKind::TmtA, TaskKind::TmtB}) {
    partial.recordings.emplace_back(t, std::vector<PenSample>{down(0, 0, 0), down(5, 1, 0), down(10, 2, 0)});
  }
  const ValidationReport r = validate_session(partial);
  ASSERT_EQ(r.missing_tasks.size(), 1u);
  EXPECT_EQ(r.missing_tasks[0], TaskKind::Cdt);

  DrawingSession odd;
  odd.recordings.emplace_back(TaskKind::Sentence, std::vector<PenSample>{down(0, 0, 0), down(5, 1, 0)});
  odd.recordings.emplace_back(TaskKind::Cdt, std::vector<PenSample>{up(0), up(5)});
  const ValidationReport r2 = validate_session(odd);
  ASSERT_EQ(r2.derivative_ineligible.size(), 1u);
  EXPECT_EQ(r2.derivative_ineligible[0].first, TaskKind::Sentence);
  EXPECT_EQ(r2.derivative_ineligible[0].second, 1u);
  ASSERT_EQ(r2.zero_stroke_tasks.size(), 1u);
  EXPECT_EQ(r2.zero_stroke_tasks[0], TaskKind::Cdt);
}

TEST(Names, TaskAndDiagnosisRoundTrip) {
  for (TaskKind t : kAllTasks) EXPECT_EQ(parse_task_name(task_name(t)), t);
  EXPECT_EQ(task_name(TaskKind::TmtB), "TMT_B");
  for (Diagnosis d : {Diagnosis::CN, Diagnosis::MCI, Diagnosis::Dementia}) {
    EXPECT_EQ(parse_diagnosis(diagnosis_name(d)), d);
  }
  EXPECT_FALSE(parse_diagnosis("AD").has_value());
}
