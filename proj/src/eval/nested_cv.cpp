#include "inkscreen/eval/nested_cv.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "inkscreen/error.hpp"
#include "inkscreen/eval/folds.hpp"
#include "inkscreen/learn/preprocess.hpp"
#include "parallel.hpp"

namespace inkscreen::eval {

using learn::Matrix;
using learn::Vector;

namespace {

constexpr std::uint64_t kOuterFoldStream = 0x1000;
constexpr std::uint64_t kUnitStream = 0x2000;
constexpr std::uint64_t kPermutationStream = 0x3000;

double objective(Task task, const Vector& truth, const Matrix& scores) {
  if (task == Task::Regression) return r2_score(truth, scores.col(0));
  if (scores.cols() == 2) return roc_auc(truth, scores.col(1), 1);
  return macro_auc(truth, scores);
}

Vector argmax_rows(const Matrix& scores) {
  Vector out(scores.rows());
  for (Index i = 0; i < scores.rows(); ++i) {
    Index best = 0;
    scores.row(i).maxCoeff(&best);
    out(i) = static_cast<double>(best);
  }
  return out;
}

void check_dataset(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y, Task task,
                   int n_classes) {
  if (X.rows() != y.size()) throw Error(ErrorCode::ShapeMismatch, "X and y disagree on row count");
  if (!y.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite target");
  if (task == Task::Classification) {
    if (n_classes < 2) throw Error(ErrorCode::SingleClass, "classification needs two classes");
    for (Index i = 0; i < y.size(); ++i) {
      if (y(i) < 0 || y(i) >= n_classes || y(i) != std::floor(y(i))) {
        throw Error(ErrorCode::ShapeMismatch, "labels must be integers in [0, n_classes)");
      }
    }
  }
}

struct UnitOutput {
  std::vector<Index> test_rows;
  Matrix scores;
  FoldChoice choice;
};

UnitOutput run_unit(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y, Task task,
                    int n_classes, const CVConfig& config, const std::vector<int>& folds, int repeat,
                    int fold) {
  UnitOutput out;
  const std::vector<Index> train = fold_rows(folds, fold, false);
  out.test_rows = fold_rows(folds, fold, true);
  const std::uint64_t unit_seed =
      learn::mix_seed(config.seed, kUnitStream + static_cast<std::uint64_t>(repeat * config.outer_k + fold));
  const auto notify = [&](Stage stage) {
    if (config.observer) config.observer(stage, repeat, fold, train);
  };
  FittedPipeline fit = fit_pipeline(learn::select_rows(X, train), learn::select_entries(y, train), task,
                                    n_classes, config, unit_seed, notify);
  out.scores = pipeline_scores(fit, learn::select_rows(X, out.test_rows));
  out.choice = FoldChoice{repeat, fold, fit.hyperparams, fit.inner_score, std::move(fit.selected)};
  return out;
}

}  // namespace

std::vector<Hyperparams> HyperGrid::candidates(Family family) const {
  std::vector<Hyperparams> out;
  switch (family) {
    case Family::ElasticNet:
      for (double a : en_l1_ratio) {
        for (double c : en_C) {
          Hyperparams hp;
          hp.family = family;
          hp.elastic_net = {a, c};
          out.push_back(hp);
        }
      }
      break;
    case Family::RandomForest:
      for (int d : rf_max_depth) {
        for (int f : rf_max_features) {
          Hyperparams hp;
          hp.family = family;
          hp.max_depth = d;
          hp.max_features = f;
          out.push_back(hp);
        }
      }
      break;
    case Family::Svm:
      for (learn::Kernel k : svm_kernel) {
        for (double c : svm_C) {
          const std::vector<double> gammas =
              k == learn::Kernel::Linear ? std::vector<double>{svm_gamma.empty() ? 0.1 : svm_gamma.front()}
                                         : svm_gamma;
          for (double g : gammas) {
            Hyperparams hp;
            hp.family = family;
            hp.svm.kernel = k;
            hp.svm.C = c;
            hp.svm.gamma = g;
            out.push_back(hp);
          }
        }
      }
      break;
  }
  return out;
}

HyperGrid HyperGrid::reduced() {
  HyperGrid g;
  g.en_l1_ratio = {0.55, 1.0};
  g.en_C = {0.01, 0.1, 1.0};
  g.rf_max_depth = {3};
  g.rf_max_features = {3, 5};
  g.svm_kernel = {learn::Kernel::Linear, learn::Kernel::Rbf};
  g.svm_C = {1.0, 10.0};
  g.svm_gamma = {0.01};
  return g;
}

GridSearchResult inner_grid_search(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                                   Task task, int n_classes, std::span<const Hyperparams> candidates,
                                   int inner_k, std::uint64_t seed, int n_trees) {
  if (candidates.empty()) throw Error(ErrorCode::BadSpec, "empty hyperparameter grid");
  GridSearchResult result;
  result.scores.assign(candidates.size(), 0.0);
  {
    const std::vector<int> folds = stratified_kfold(y, task, inner_k, seed);
    for (int f = 0; f < inner_k; ++f) {
      const std::vector<Index> train = fold_rows(folds, f, false);
      const std::vector<Index> valid = fold_rows(folds, f, true);
      const Matrix X_train = learn::select_rows(X, train);
      const Vector y_train = learn::select_entries(y, train);
      const Matrix X_valid = learn::select_rows(X, valid);
      const Vector y_valid = learn::select_entries(y, valid);
      const learn::FitSettings settings{n_trees, learn::mix_seed(seed, static_cast<std::uint64_t>(f))};
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const learn::Model m = learn::fit_model(task, candidates[c], X_train, y_train, n_classes, settings);
        result.scores[c] += objective(task, y_valid, learn::model_scores(m, X_valid)) / inner_k;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (result.scores[c] > result.scores[best]) best = c;
  }
  result.best = candidates[best];
  result.best_score = result.scores[best];
  return result;
}

FittedPipeline fit_pipeline(const Eigen::Ref<const Matrix>& X_raw, const Eigen::Ref<const Vector>& y_train,
                            Task task, int n_classes, const CVConfig& config, std::uint64_t seed,
                            const std::function<void(Stage)>& notify) {
  const auto stage = [&](Stage s) {
    if (notify) notify(s);
  };
  FittedPipeline out;
  stage(Stage::Preprocess);
  out.preprocessor = learn::fit_preprocessor(X_raw);
  const Matrix X_train = learn::apply_preprocessor(out.preprocessor, X_raw);

  stage(Stage::Selection);
  if (task == Task::Classification) {
    const Vector w = learn::balanced_class_weights(y_train, n_classes).sample_weights(y_train);
    out.selected = learn::l1_select_features(X_train, y_train, learn::SelectorFlavor::Logistic, n_classes,
                                             config.selection_C, w);
  } else if (config.regression_selector == learn::SelectorFlavor::Lasso) {
    out.selected = learn::l1_select_features(X_train, y_train, learn::SelectorFlavor::Lasso, 0,
                                             config.selection_C, Vector::Ones(y_train.size()));
  } else {
    // Logistic selection on a regression target splits it at the train median.
    std::vector<double> values(y_train.data(), y_train.data() + y_train.size());
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2), values.end());
    const double cut = values[values.size() / 2];
    Vector binary = (y_train.array() > cut).cast<double>();
    if (binary.minCoeff() == binary.maxCoeff()) binary = (y_train.array() >= cut).cast<double>();
    const Vector w = learn::balanced_class_weights(binary, 2).sample_weights(binary);
    out.selected = learn::l1_select_features(X_train, binary, learn::SelectorFlavor::Logistic, 2,
                                             config.selection_C, w);
  }
  const Matrix X_sel = learn::select_cols(X_train, out.selected);

  stage(Stage::GridSearch);
  bool have_best = false;
  GridSearchResult best;
  for (Family family : config.families) {
    const auto candidates = config.grid.candidates(family);
    if (candidates.empty()) continue;
    GridSearchResult r = inner_grid_search(X_sel, y_train, task, n_classes, candidates, config.inner_k,
                                           learn::mix_seed(seed, static_cast<std::uint64_t>(family)),
                                           config.n_trees);
    if (!have_best || r.best_score > best.best_score) {
      best = std::move(r);
      have_best = true;
    }
  }
  if (!have_best) throw Error(ErrorCode::BadSpec, "no model family with grid candidates");

  out.hyperparams = best.best;
  out.inner_score = best.best_score;
  out.model = learn::fit_model(task, best.best, X_sel, y_train, n_classes,
                               {config.n_trees, learn::mix_seed(seed, 99)});
  return out;
}

Matrix pipeline_scores(const FittedPipeline& fit, const Eigen::Ref<const Matrix>& X_raw) {
  return learn::model_scores(fit.model, learn::select_cols(learn::apply_preprocessor(fit.preprocessor, X_raw),
                                                           fit.selected));
}

const MetricSummary& CVResult::metric(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw Error(ErrorCode::BadSpec, "no metric named " + std::string(name));
}

std::string CVResult::headline_name() const { return task == Task::Classification ? "auc" : "r2"; }

double CVResult::headline() const { return metric(headline_name()).interval.mean; }

CVResult nested_cv(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y, Task task,
                   int n_classes, const CVConfig& config) {
  check_dataset(X, y, task, n_classes);
  if (config.repeats < 1) throw Error(ErrorCode::BadSpec, "repeats must be >= 1");

  std::vector<std::vector<int>> folds;
  for (int r = 0; r < config.repeats; ++r) {
    folds.push_back(stratified_kfold(
        y, task, config.outer_k, learn::mix_seed(config.seed, kOuterFoldStream + static_cast<std::uint64_t>(r))));
  }

  const std::size_t units = static_cast<std::size_t>(config.repeats * config.outer_k);
  std::vector<UnitOutput> outputs(units);
  detail::parallel_for(units, config.threads, [&](std::size_t u) {
    const int r = static_cast<int>(u) / config.outer_k;
    const int f = static_cast<int>(u) % config.outer_k;
    outputs[u] = run_unit(X, y, task, n_classes, config, folds[static_cast<std::size_t>(r)], r, f);
  });

  CVResult result;
  result.task = task;
  result.n_classes = task == Task::Classification ? n_classes : 0;
  result.seed = config.seed;
  if (task == Task::Classification) result.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);

  std::vector<std::string> names;
  if (task == Task::Regression) {
    names = {"r2", "mae", "rmse"};
  } else if (n_classes == 2) {
    names = {"accuracy", "auc", "sensitivity", "specificity", "f1"};
  } else {
    names = {"accuracy", "auc"};
  }
  std::vector<std::vector<double>> per_repeat(names.size());

  const Index width = task == Task::Classification ? n_classes : 1;
  for (int r = 0; r < config.repeats; ++r) {
    Matrix scores(y.size(), width);
    for (int f = 0; f < config.outer_k; ++f) {
      UnitOutput& out = outputs[static_cast<std::size_t>(r * config.outer_k + f)];
      for (std::size_t i = 0; i < out.test_rows.size(); ++i) {
        scores.row(out.test_rows[i]) = out.scores.row(static_cast<Index>(i));
      }
      result.choices.push_back(std::move(out.choice));
    }
    std::vector<double> values;
    if (task == Task::Regression) {
      const Vector pred = scores.col(0);
      values = {r2_score(y, pred), mean_absolute_error(y, pred), root_mean_squared_error(y, pred)};
    } else {
      const Vector pred = argmax_rows(scores);
      result.confusion += confusion_matrix(y, pred, n_classes);
      values = {accuracy(y, pred), objective(task, y, scores)};
      if (n_classes == 2) {
        values.push_back(sensitivity(y, pred, 1));
        values.push_back(specificity(y, pred, 1));
        values.push_back(f1_score(y, pred, 1));
      }
    }
    for (std::size_t m = 0; m < names.size(); ++m) per_repeat[m].push_back(values[m]);
  }

  for (std::size_t m = 0; m < names.size(); ++m) {
    MetricSummary s;
    s.name = names[m];
    s.per_repeat = std::move(per_repeat[m]);
    if (s.per_repeat.size() >= 2) {
      s.interval = ci95(s.per_repeat);
    } else {
      s.interval = Interval{s.per_repeat.front(), s.per_repeat.front(), s.per_repeat.front()};
    }
    result.metrics.push_back(std::move(s));
  }
  return result;
}

double permutation_p_value(double observed, std::span<const double> null_distribution) {
  const auto exceed = std::count_if(null_distribution.begin(), null_distribution.end(),
                                    [&](double v) { return v >= observed; });
  return (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(null_distribution.size()));
}

PermutationResult permutation_test(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                                   Task task, int n_classes, const CVConfig& config, int n_perm,
                                   std::uint64_t seed, std::optional<double> observed) {
  if (n_perm < 1) throw Error(ErrorCode::BadPermCount, "permutation count must be >= 1");
  PermutationResult result;
  result.seed = seed;
  result.metric = task == Task::Classification ? "auc" : "r2";
  result.observed = observed ? *observed : nested_cv(X, y, task, n_classes, config).headline();

  CVConfig inner = config;
  inner.threads = 1;
  inner.observer = nullptr;
  result.null_distribution.assign(static_cast<std::size_t>(n_perm), 0.0);
  detail::parallel_for(static_cast<std::size_t>(n_perm), config.threads, [&](std::size_t p) {
    std::vector<Index> order(static_cast<std::size_t>(y.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
    std::mt19937_64 rng(learn::mix_seed(seed, kPermutationStream + p));
    std::shuffle(order.begin(), order.end(), rng);
    const Vector shuffled = learn::select_entries(y, order);
    result.null_distribution[p] = nested_cv(X, shuffled, task, n_classes, inner).headline();
  });
  result.p_value = permutation_p_value(result.observed, result.null_distribution);
  return result;
}

}  // namespace inkscreen::eval
