#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inkscreen/eval/metrics.hpp"
#include "inkscreen/learn/feature_selection.hpp"
#include "inkscreen/learn/model.hpp"
#include "inkscreen/learn/preprocess.hpp"

namespace inkscreen::eval {

using learn::Family;
using learn::Hyperparams;
using learn::Index;
using learn::Task;

struct HyperGrid {
  std::vector<double> en_l1_ratio{0.1, 0.325, 0.55, 0.775, 1.0};
  std::vector<double> en_C{0.001, 0.01, 0.1, 1.0};
  std::vector<int> rf_max_depth{2, 3};
  std::vector<int> rf_max_features{2, 3, 4, 5};
  std::vector<learn::Kernel> svm_kernel{learn::Kernel::Linear, learn::Kernel::Rbf};
  std::vector<double> svm_C{1.0, 10.0, 50.0, 100.0, 200.0};
  std::vector<double> svm_gamma{0.0001, 0.001, 0.01, 0.1, 1.0};

  // Grid order is the tie-break order. The linear kernel ignores gamma and
  // contributes one candidate per C.
  std::vector<Hyperparams> candidates(Family family) const;

  // A small grid for smoke runs and time-bounded acceptance runs.
  static HyperGrid reduced();
};

enum class Stage { Preprocess, Selection, GridSearch };

// Receives the original dataset row indices handed to each train-only stage.
using AccessObserver = std::function<void(Stage, int repeat, int fold, std::span<const Index> rows)>;

struct CVConfig {
  int repeats = 10;
  int outer_k = 5;
  int inner_k = 5;
  std::uint64_t seed = 0;
  std::vector<Family> families{Family::ElasticNet, Family::RandomForest, Family::Svm};
  HyperGrid grid;
  double selection_C = learn::kDefaultSelectionC;
  learn::SelectorFlavor regression_selector = learn::SelectorFlavor::Lasso;
  int n_trees = 100;
  int threads = 1;  // 0 = hardware concurrency
  AccessObserver observer;
};

struct GridSearchResult {
  Hyperparams best;
  double best_score = 0.0;
  std::vector<double> scores;  // one per candidate, in grid order
};

// AUC (macro one-vs-rest for multiclass) or R^2, averaged over inner folds.
// The first candidate with the maximal mean wins.
GridSearchResult inner_grid_search(const Eigen::Ref<const learn::Matrix>& X,
                                   const Eigen::Ref<const learn::Vector>& y, Task task,
                                   int n_classes, std::span<const Hyperparams> candidates,
                                   int inner_k, std::uint64_t seed, int n_trees = 100);

// The train-only part of one outer fold: imputation/scaling, L1 selection,
// per-family inner grid search and the refit of the winner.
struct FittedPipeline {
  learn::Preprocessor preprocessor;
  std::vector<Index> selected;
  Hyperparams hyperparams;
  double inner_score = 0.0;
  learn::Model model;
};

// notify is invoked before each stage. Rows of X_raw may contain NaN.
FittedPipeline fit_pipeline(const Eigen::Ref<const learn::Matrix>& X_raw,
                            const Eigen::Ref<const learn::Vector>& y, Task task, int n_classes,
                            const CVConfig& config, std::uint64_t seed,
                            const std::function<void(Stage)>& notify = {});

// Scores (as learn::model_scores) for raw rows.
learn::Matrix pipeline_scores(const FittedPipeline& fit, const Eigen::Ref<const learn::Matrix>& X_raw);

struct FoldChoice {
  int repeat = 0;
  int fold = 0;
  Hyperparams hyperparams;
  double inner_score = 0.0;
  std::vector<Index> selected_features;
};

struct MetricSummary {
  std::string name;
  std::vector<double> per_repeat;
  Interval interval;
};

struct CVResult {
  Task task = Task::Classification;
  int n_classes = 0;
  int positive_class = 1;
  std::uint64_t seed = 0;
  std::vector<MetricSummary> metrics;
  Eigen::MatrixXi confusion;  // pooled over repeats; empty for regression
  std::vector<FoldChoice> choices;

  const MetricSummary& metric(std::string_view name) const;
  // Mean AUC for classification, mean R^2 for regression.
  double headline() const;
  std::string headline_name() const;
};

// Missing features are NaN in X. Classification labels are 0..K-1; for binary
// targets class 1 is the designated positive (more impaired) group.
CVResult nested_cv(const Eigen::Ref<const learn::Matrix>& X, const Eigen::Ref<const learn::Vector>& y,
                   Task task, int n_classes, const CVConfig& config);

struct PermutationResult {
  std::string metric;
  double observed = 0.0;
  std::vector<double> null_distribution;
  double p_value = 1.0;
  std::uint64_t seed = 0;
};

// (1 + #{null >= observed}) / (1 + n)
double permutation_p_value(double observed, std::span<const double> null_distribution);

// Shuffles y with per-permutation seeds, reruns nested_cv under the same
// configuration and compares headline metrics. `observed` skips the unshuffled
// run when the caller already has it.
PermutationResult permutation_test(const Eigen::Ref<const learn::Matrix>& X,
                                   const Eigen::Ref<const learn::Vector>& y, Task task,
                                   int n_classes, const CVConfig& config, int n_perm,
                                   std::uint64_t seed, std::optional<double> observed = std::nullopt);

}  // namespace inkscreen::eval
