#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "inkscreen/error.hpp"
#include "inkscreen/features.hpp"
#include "inkscreen/synth.hpp"

using namespace inkscreen;
using namespace inkscreen::synth;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

CohortSpec at_theta(double theta) {
  CohortSpec s;
  s.theta = theta;
  return s;
}

double task_feature(const DrawingSession& s, TaskKind task, std::string_view name) {
  const auto f = features::extract_task_features(*s.find(task));
  return f.values(static_cast<Eigen::Index>(*features::feature_index(name)));
}

// Two-sided sign test p-value for `wins` successes out of n, via the exact
// binomial tail.
double sign_test_p(int wins, int n) {
  const int k = std::min(wins, n - wins);
  double tail = 0;
  for (int i = 0; i <= k; ++i) tail += std::exp(std::lgamma(n + 1) - std::lgamma(i + 1) - std::lgamma(n - i + 1) - n * std::log(2.0));
  return std::min(1.0, 2 * tail);
}

}  // namespace

TEST(GenerateSession, DeterministicBytes) {
  const CohortSpec spec = at_theta(0.4);
  EXPECT_EQ(serialize_session(generate_session(spec, 7)), serialize_session(generate_session(spec, 7)));
  EXPECT_NE(serialize_session(generate_session(spec, 7)), serialize_session(generate_session(spec, 8)));
}

TEST(GenerateSession, ParsesWithEmptyValidationReport) {
  for (double theta : {0.0, 0.5, 1.0}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const std::string text = serialize_session(generate_session(at_theta(theta), seed));
      const DrawingSession back = parse_session(text);
      EXPECT_TRUE(validate_session(back).empty()) << theta << " " << seed;
      EXPECT_EQ(back.recordings.size(), 5u);
      ASSERT_TRUE(back.subject.has_value());
      EXPECT_EQ(back.subject->diagnosis, diagnosis_for(theta));
      const auto f = features::extract_session_features(back);
      EXPECT_EQ(f.values.size(), 190);
    }
  }
}

TEST(GenerateSession, EffectChannelsAreMonotoneInTheta) {
  const int n = 100;
  double pause_low = 0, pause_high = 0;
  int pause_wins = 0, speed_wins = 0;
  for (int seed = 0; seed < n; ++seed) {
    const DrawingSession a = generate_session(at_theta(0.0), 9000 + seed);
    const DrawingSession b = generate_session(at_theta(1.0), 9000 + seed);
    const double pa = task_feature(a, TaskKind::Pentagon, "pause_mean");
    const double pb = task_feature(b, TaskKind::Pentagon, "pause_mean");
    pause_low += pa / n;
    pause_high += pb / n;
    pause_wins += pb > pa;
    speed_wins += task_feature(b, TaskKind::TmtA, "speed_median") < task_feature(a, TaskKind::TmtA, "speed_median");
  }
  EXPECT_GT(pause_high, pause_low);
  EXPECT_GT(pause_wins, n / 2);
  EXPECT_LT(sign_test_p(pause_wins, n), 0.01);
  EXPECT_GT(speed_wins, n / 2);
  EXPECT_LT(sign_test_p(speed_wins, n), 0.01);
}

TEST(Labels, ThresholdsAndRanges) {
  EXPECT_EQ(diagnosis_for(0.0), Diagnosis::CN);
  EXPECT_EQ(diagnosis_for(0.5), Diagnosis::MCI);
  EXPECT_EQ(diagnosis_for(1.0), Diagnosis::Dementia);
  for (int seed = 0; seed < 2000; ++seed) {
    const double theta = (seed % 101) / 100.0;
    const Labels l = draw_labels(theta, seed);
    EXPECT_GE(l.mmse, 0);
    EXPECT_LE(l.mmse, 30);
    EXPECT_TRUE(std::isfinite(l.mtl_atrophy_z));
    EXPECT_EQ(l.diagnosis, diagnosis_for(theta));
  }
}

TEST(Cohort, AllHealthyThetaGivesCn) {
  const Cohort c = generate_cohort(6, FixedTheta{0.0}, 3);
  ASSERT_EQ(c.members.size(), 6u);
  for (const auto& m : c.members) EXPECT_EQ(m.session.subject->diagnosis, Diagnosis::CN);
  EXPECT_EQ(c.members[0].session.session_id, "subj-0001");
}

TEST(Cohort, ReferenceStrataCounts) {
  const Cohort c = generate_cohort(145, reference_strata(), 11);
  int counts[3] = {0, 0, 0};
  for (const auto& m : c.members) ++counts[static_cast<int>(*m.session.subject->diagnosis)];
  EXPECT_EQ(counts[0], 46);
  EXPECT_EQ(counts[1], 67);
  EXPECT_EQ(counts[2], 32);
  std::ostringstream csv;
  write_labels_csv(csv, c);
  EXPECT_EQ(csv.str().rfind("session_id,diagnosis,mmse,mtl_atrophy_z", 0), 0u);
  EXPECT_EQ(code_of([] { generate_cohort(10, StratifiedTheta{{3, 3}, {{0, 0.1}, {0.9, 1}}}, 1); }), ErrorCode::BadSpec);
}

TEST(Spec, ValidationAndOverrides) {
  CohortSpec s;
  EXPECT_NO_THROW(s.validate());
  s.speed_mean_impaired = 90.0;  // impaired faster than healthy
  EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::BadSpec);
  const CohortSpec o = cohort_spec_from_json({{"theta", 0.25}, {"sampling_hz", 100}});
  EXPECT_DOUBLE_EQ(o.theta, 0.25);
  EXPECT_DOUBLE_EQ(o.sampling_hz, 100.0);
  EXPECT_EQ(code_of([] { cohort_spec_from_json({{"bogus", 1}}); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { cohort_spec_from_json({{"theta", 1.5}}); }), ErrorCode::BadSpec);
  const CohortSpec mid = at_theta(0.5);
  EXPECT_DOUBLE_EQ(mid.speed_mean(), 0.5 * (mid.speed_mean_healthy + mid.speed_mean_impaired));
}

TEST(Layouts, DefaultShapesAndRoundTrip) {
  const TaskLayouts& l = default_layouts();
  EXPECT_EQ(l.at(TaskKind::TmtA).targets.size(), 25u);
  EXPECT_EQ(l.at(TaskKind::TmtB).targets.size(), 25u);
  const auto& b = l.at(TaskKind::TmtB).target_labels;
  EXPECT_EQ(b[0], "1");
  EXPECT_EQ(b[1], "A");
  EXPECT_EQ(b[2], "2");
  EXPECT_EQ(b[24], "13");
  for (const auto& t : l.tasks) {
    EXPECT_FALSE(t.strokes.empty());
    EXPECT_FALSE(t.instruction.empty());
    for (const auto& p : t.strokes) {
      for (const auto& v : p) {
        EXPECT_GE(v.x(), 0.0);
        EXPECT_LE(v.x(), l.canvas_width);
        EXPECT_GE(v.y(), 0.0);
        EXPECT_LE(v.y(), l.canvas_height);
      }
    }
  }
  const auto j = layouts_to_json(l);
  EXPECT_EQ(layouts_to_json(layouts_from_json(j)), j);
  EXPECT_EQ(code_of([] { layouts_from_json(nlohmann::json::object()); }), ErrorCode::BadSpec);
}

TEST(Layouts, ShippedFileMatchesBuiltIn) {
  std::ifstream in(INKSCREEN_LAYOUT_FILE);
  ASSERT_TRUE(in) << INKSCREEN_LAYOUT_FILE;
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j, layouts_to_json(default_layouts()));
}
