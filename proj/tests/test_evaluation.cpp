#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include "inkscreen/error.hpp"
#include "inkscreen/eval/folds.hpp"
#include "inkscreen/eval/metrics.hpp"
#include "inkscreen/eval/nested_cv.hpp"
#include "inkscreen/eval/report.hpp"

using namespace inkscreen;
using namespace inkscreen::eval;
using learn::Matrix;
using learn::Vector;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(v.size());
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double brute_auc(const Vector& y, const Vector& s) {
  double concordant = 0, pairs = 0;
  for (Index i = 0; i < y.size(); ++i) {
    for (Index j = 0; j < y.size(); ++j) {
      if (y(i) != 1 || y(j) != 0) continue;
      pairs += 1;
      concordant += s(i) > s(j) ? 1.0 : (s(i) == s(j) ? 0.5 : 0.0);
    }
  }
  return concordant / pairs;
}

CVConfig small_config(std::uint64_t seed) {
  CVConfig c;
  c.repeats = 2;
  c.outer_k = 3;
  c.inner_k = 3;
  c.seed = seed;
  c.grid = HyperGrid::reduced();
  c.n_trees = 10;
  return c;
}

struct Data {
  Matrix X;
  Vector y;
};

Data noise_data(std::uint64_t seed, Index n, Index p, int classes = 2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  Data d{Matrix(n, p), Vector(n)};
  for (auto& v : d.X.reshaped()) v = g(rng);
  for (Index i = 0; i < n; ++i) d.y(i) = i % classes;
  std::shuffle(d.y.begin(), d.y.end(), rng);
  return d;
}

}  // namespace

TEST(Folds, StratifiedCounts) {
  Vector y(15);
  for (Index i = 0; i < 15; ++i) y(i) = i < 10 ? 0 : 1;
  const auto folds = stratified_kfold(y, Task::Classification, 5, 42);
  for (int f = 0; f < 5; ++f) {
    int zeros = 0, ones = 0;
    for (Index i = 0; i < 15; ++i) {
      if (folds[i] != f) continue;
      (y(i) == 0 ? zeros : ones)++;
    }
    EXPECT_EQ(zeros, 2);
    EXPECT_EQ(ones, 1);
  }
  EXPECT_EQ(stratified_kfold(y, Task::Classification, 5, 42), folds);
  EXPECT_NE(stratified_kfold(y, Task::Classification, 5, 43), folds);
  Vector few(8);
  few << 0, 0, 0, 0, 0, 1, 1, 1;
  EXPECT_EQ(code_of([&] { stratified_kfold(few, Task::Classification, 5, 1); }), ErrorCode::TooFewPerClass);
}

TEST(Folds, PartitionAndBalanceProperties) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 20 + trial * 3;
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = trial % 2 ? i % 3 : std::normal_distribution<double>(0, 1)(rng);
    const Task task = trial % 2 ? Task::Classification : Task::Regression;
    const int k = 2 + trial % 4;
    const auto folds = stratified_kfold(y, task, k, trial);
    std::vector<int> size(k, 0);
    for (int f : folds) {
      ASSERT_GE(f, 0);
      ASSERT_LT(f, k);
      ++size[f];
    }
    EXPECT_LE(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()), 1);
    std::set<Index> seen;
    for (int f = 0; f < k; ++f) {
      for (Index i : fold_rows(folds, f, true)) EXPECT_TRUE(seen.insert(i).second);
      EXPECT_EQ(fold_rows(folds, f, true).size() + fold_rows(folds, f, false).size(), static_cast<std::size_t>(n));
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(n));
    if (task == Task::Classification) {
      for (int c = 0; c < 3; ++c) {
        std::vector<int> per(k, 0);
        for (Index i = 0; i < n; ++i) per[folds[i]] += y(i) == c;
        EXPECT_LE(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()), 1);
      }
    }
  }
}

TEST(Metrics, WorkedAucExample) {
  EXPECT_EQ(roc_auc(vec({0, 0, 1, 1}), vec({0.1, 0.4, 0.35, 0.8})), 0.75);
  EXPECT_EQ(code_of([] { roc_auc(vec({1, 1}), vec({0.1, 0.2})); }), ErrorCode::DegenerateAUC);
}

TEST(Metrics, AucMatchesPairCounting) {
  std::mt19937_64 rng(200);
  std::uniform_int_distribution<int> n_dist(2, 50), bucket(0, 5);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_dist(rng);
    Vector y(n), s(n);
    for (int i = 0; i < n; ++i) {
      y(i) = i % 2;
      s(i) = trial % 3 == 0 ? bucket(rng) : g(rng);  // ties in a third of the cases
    }
    std::shuffle(y.begin(), y.end(), rng);
    EXPECT_NEAR(roc_auc(y, s), brute_auc(y, s), 1e-12);
  }
}

TEST(Metrics, PerfectPredictions) {
  const Vector y = vec({0, 1, 1, 0, 1});
  EXPECT_EQ(accuracy(y, y), 1.0);
  EXPECT_EQ(sensitivity(y, y, 1), 1.0);
  EXPECT_EQ(specificity(y, y, 1), 1.0);
  EXPECT_EQ(f1_score(y, y, 1), 1.0);
  EXPECT_EQ(roc_auc(y, y), 1.0);
  EXPECT_EQ(r2_score(y, y), 1.0);
  const Vector r = vec({1, 2, 3, 6});
  EXPECT_EQ(r2_score(r, Vector::Constant(4, 3.0)), 0.0);
}

TEST(Metrics, RegressionFormulas) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 3 + trial;
    Vector t(n), p(n);
    for (Index i = 0; i < n; ++i) t(i) = g(rng), p(i) = t(i) + 0.5 * g(rng);
    double ss_res = 0, ss_tot = 0, abs = 0, mean = 0;
    for (Index i = 0; i < n; ++i) mean += t(i) / n;
    for (Index i = 0; i < n; ++i) {
      ss_res += (t(i) - p(i)) * (t(i) - p(i));
      ss_tot += (t(i) - mean) * (t(i) - mean);
      abs += std::fabs(t(i) - p(i));
    }
    EXPECT_NEAR(r2_score(t, p), 1 - ss_res / ss_tot, 1e-12);
    EXPECT_NEAR(mean_absolute_error(t, p), abs / n, 1e-12);
    EXPECT_NEAR(root_mean_squared_error(t, p), std::sqrt(ss_res / n), 1e-12);
  }
}

TEST(Metrics, ConfusionAndSymmetry) {
  const Vector t = vec({0, 0, 1, 1, 1, 0, 1});
  const Vector p = vec({0, 1, 1, 0, 1, 0, 1});
  const Eigen::MatrixXi cm = confusion_matrix(t, p, 2);
  EXPECT_EQ(cm(0, 0), 2);
  EXPECT_EQ(cm(0, 1), 1);
  EXPECT_EQ(cm(1, 0), 1);
  EXPECT_EQ(cm(1, 1), 3);
  EXPECT_EQ(cm.sum(), 7);
  const Vector tf = (1.0 - t.array()).matrix(), pf = (1.0 - p.array()).matrix();
  // Relabeling swaps the roles; so does moving the positive designation.
  EXPECT_EQ(sensitivity(t, p, 1), specificity(tf, pf, 1));
  EXPECT_EQ(specificity(t, p, 1), sensitivity(tf, pf, 1));
  EXPECT_EQ(sensitivity(t, p, 1), specificity(t, p, 0));
  EXPECT_EQ(specificity(t, p, 1), sensitivity(t, p, 0));
  EXPECT_DOUBLE_EQ(sensitivity(t, p, 1), 0.75);
  EXPECT_DOUBLE_EQ(specificity(t, p, 1), 2.0 / 3.0);
}

TEST(Metrics, MacroAucAveragesOneVsRest) {
  const Vector y = vec({0, 1, 2, 0, 1, 2});
  Matrix s(6, 3);
  s << 0.9, 0.1, 0.0, 0.2, 0.7, 0.1, 0.1, 0.6, 0.3, 0.5, 0.3, 0.2, 0.3, 0.4, 0.3, 0.0, 0.1, 0.9;
  double sum = 0;
  for (int k = 0; k < 3; ++k) {
    Vector yk(6);
    for (int i = 0; i < 6; ++i) yk(i) = y(i) == k;
    sum += brute_auc(yk, s.col(k));
  }
  EXPECT_NEAR(macro_auc(y, s), sum / 3, 1e-15);
}

TEST(Metrics, ConfidenceInterval) {
  const std::vector<double> same = {0.7, 0.7, 0.7};
  const Interval a = ci95(same);
  EXPECT_EQ(a.low, 0.7);
  EXPECT_EQ(a.mean, 0.7);
  EXPECT_EQ(a.high, 0.7);
  const std::vector<double> two = {0.0, 1.0};
  const Interval b = ci95(two);
  EXPECT_DOUBLE_EQ(b.mean, 0.5);
  EXPECT_NEAR(b.high - b.mean, 0.98, 1e-12);
  EXPECT_NEAR(b.mean - b.low, 0.98, 1e-12);
  const std::vector<double> one = {0.3};
  EXPECT_EQ(code_of([&] { ci95(one); }), ErrorCode::TooFew);
}

TEST(GridSearch, SinglePointAndTieRule) {
  const Data d = noise_data(3, 40, 3);
  Hyperparams a;
  a.family = Family::ElasticNet;
  a.elastic_net = {0.5, 0.1};
  const std::vector<Hyperparams> one = {a};
  EXPECT_EQ(inner_grid_search(d.X, d.y, Task::Classification, 2, one, 3, 1).best, a);
  Hyperparams b = a;
  b.elastic_net.l1_ratio = 0.55;  // identical objective once every weight is zero
  a.elastic_net.C = b.elastic_net.C = 1e-7;
  const std::vector<Hyperparams> tied = {a, b};
  const GridSearchResult r = inner_grid_search(d.X, d.y, Task::Classification, 2, tied, 3, 1);
  EXPECT_EQ(r.scores[0], r.scores[1]);
  EXPECT_EQ(r.best, a);
}

TEST(GridSearch, SeparableDataAvoidsStrongestPenalty) {
  int ok = 0;
  const HyperGrid grid;
  const auto candidates = grid.candidates(Family::ElasticNet);
  for (int trial = 0; trial < 10; ++trial) {
    std::mt19937_64 rng(500 + trial);
    std::normal_distribution<double> g(0, 1);
    Matrix X(60, 5);
    Vector y(60);
    for (Index i = 0; i < 60; ++i) {
      y(i) = i % 2;
      for (Index j = 0; j < 5; ++j) X(i, j) = g(rng) + (j < 2 ? 2.0 * (y(i) - 0.5) : 0.0);
    }
    const auto r = inner_grid_search(X, y, Task::Classification, 2, candidates, 5, trial);
    ok += r.best.elastic_net.C != 0.001;
  }
  EXPECT_GE(ok, 9);
}

TEST(GridSearch, GridsStayInsideRanges) {
  const HyperGrid grid;
  EXPECT_EQ(grid.candidates(Family::ElasticNet).size(), 20u);
  EXPECT_EQ(grid.candidates(Family::RandomForest).size(), 8u);
  EXPECT_EQ(grid.candidates(Family::Svm).size(), 30u);
  for (const auto& h : grid.candidates(Family::ElasticNet)) {
    EXPECT_GE(h.elastic_net.l1_ratio, 0.1);
    EXPECT_LE(h.elastic_net.l1_ratio, 1.0);
    EXPECT_GE(h.elastic_net.C, 0.001);
    EXPECT_LE(h.elastic_net.C, 1.0);
  }
  for (const auto& h : grid.candidates(Family::Svm)) {
    EXPECT_GE(h.svm.C, 1.0);
    EXPECT_LE(h.svm.C, 200.0);
    EXPECT_GE(h.svm.gamma, 0.0001);
    EXPECT_LE(h.svm.gamma, 1.0);
  }
}

TEST(NestedCv, TrainOnlyStagesNeverSeeTestRows) {
  const Data d = noise_data(11, 45, 12, 3);
  CVConfig c = small_config(4);
  std::mutex mu;
  // (repeat, fold) -> union of rows handed to train-only stages
  std::map<std::pair<int, int>, std::set<Index>> seen;
  std::set<Stage> stages;
  c.observer = [&](Stage s, int r, int f, std::span<const Index> rows) {
    std::lock_guard lock(mu);
    stages.insert(s);
    seen[{r, f}].insert(rows.begin(), rows.end());
  };
  nested_cv(d.X, d.y, Task::Classification, 3, c);
  EXPECT_EQ(stages.size(), 3u);
  for (int r = 0; r < c.repeats; ++r) {
    // The rows never touched by fold f are its test set; those sets must
    // partition the data.
    std::set<Index> all;
    std::size_t total = 0;
    for (int f = 0; f < c.outer_k; ++f) {
      const auto& s = seen[{r, f}];
      for (Index i = 0; i < d.X.rows(); ++i) {
        if (!s.count(i)) {
          all.insert(i);
          ++total;
        }
      }
    }
    EXPECT_EQ(total, static_cast<std::size_t>(d.X.rows()));
    EXPECT_EQ(all.size(), static_cast<std::size_t>(d.X.rows()));
  }
}

TEST(NestedCv, DeterministicAcrossThreadCounts) {
  const Data d = noise_data(12, 40, 8);
  CVConfig c = small_config(9);
  const CVResult a = nested_cv(d.X, d.y, Task::Classification, 2, c);
  c.threads = 3;
  const CVResult b = nested_cv(d.X, d.y, Task::Classification, 2, c);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  ASSERT_EQ(a.metrics.size(), b.metrics.size());
  for (std::size_t m = 0; m < a.metrics.size(); ++m) EXPECT_EQ(a.metrics[m].per_repeat, b.metrics[m].per_repeat);
}

TEST(NestedCv, ResultInvariants) {
  const Data d = noise_data(13, 45, 6, 3);
  const CVConfig c = small_config(2);
  const CVResult r = nested_cv(d.X, d.y, Task::Classification, 3, c);
  EXPECT_EQ(r.confusion.sum(), c.repeats * 45);
  EXPECT_EQ(r.choices.size(), static_cast<std::size_t>(c.repeats * c.outer_k));
  for (const auto& m : r.metrics) {
    EXPECT_EQ(m.per_repeat.size(), static_cast<std::size_t>(c.repeats));
    EXPECT_LE(m.interval.low, m.interval.mean);
    EXPECT_GE(m.interval.high, m.interval.mean);
  }
  const auto j = to_json(r);
  EXPECT_TRUE(j["metrics"]["auc"].contains("ci95"));
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
}

TEST(NestedCv, LabelFeatureGivesNearPerfectAccuracy) {
  Data d = noise_data(14, 60, 10);
  d.X.col(4) = d.y;
  const CVResult r = nested_cv(d.X, d.y, Task::Classification, 2, small_config(5));
  EXPECT_GE(r.metric("accuracy").interval.mean, 0.98);
}

TEST(NestedCv, RegressionRecoversLinearSignal) {
  Data d = noise_data(15, 60, 10);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 0.3);
  for (Index i = 0; i < 60; ++i) d.y(i) = 2 * d.X(i, 0) - d.X(i, 3) + g(rng);
  const CVResult r = nested_cv(d.X, d.y, Task::Regression, 0, small_config(6));
  EXPECT_GE(r.headline(), 0.8);
  EXPECT_EQ(r.headline_name(), "r2");
}

TEST(NestedCv, MissingValuesAreImputedInsideFolds) {
  Data d = noise_data(16, 40, 6);
  d.X.col(0) = d.y * 3.0;
  for (Index i = 0; i < 40; i += 4) d.X(i, 2) = std::numeric_limits<double>::quiet_NaN();
  const CVResult r = nested_cv(d.X, d.y, Task::Classification, 2, small_config(7));
  EXPECT_GE(r.headline(), 0.95);
}

TEST(Permutation, PValueFormula) {
  std::vector<double> nulls(100);
  for (int i = 0; i < 100; ++i) nulls[i] = i / 100.0;
  EXPECT_DOUBLE_EQ(permutation_p_value(2.0, nulls), 1.0 / 101.0);
  EXPECT_NEAR(permutation_p_value(0.5, nulls), 0.5, 0.01);
  EXPECT_DOUBLE_EQ(permutation_p_value(-1.0, nulls), 1.0);
  const Data d = noise_data(1, 20, 3);
  EXPECT_EQ(code_of([&] { permutation_test(d.X, d.y, Task::Classification, 2, small_config(1), 0, 1); }),
            ErrorCode::BadPermCount);
}

TEST(Permutation, SeparableDataGetsMinimalPValue) {
  Data d = noise_data(17, 40, 5);
  d.X.col(1) = d.y;
  CVConfig c = small_config(3);
  c.repeats = 1;
  c.families = {Family::ElasticNet};
  const PermutationResult p = permutation_test(d.X, d.y, Task::Classification, 2, c, 10, 77);
  EXPECT_EQ(p.null_distribution.size(), 10u);
  EXPECT_DOUBLE_EQ(p.p_value, 1.0 / 11.0);
  EXPECT_GT(p.p_value, 0.0);
  EXPECT_LE(p.p_value, 1.0);
  const auto j = to_json(p);
  EXPECT_EQ(j["null_distribution"].size(), 10u);
}

TEST(Report, HyperparamsRoundTrip) {
  const HyperGrid grid;
  for (Family f : {Family::ElasticNet, Family::RandomForest, Family::Svm}) {
    for (const auto& h : grid.candidates(f)) EXPECT_EQ(hyperparams_from_json(hyperparams_to_json(h)), h);
  }
}
