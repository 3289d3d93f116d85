#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "inkscreen/learn/elastic_net.hpp"
#include "inkscreen/learn/random_forest.hpp"
#include "inkscreen/learn/svm.hpp"

namespace inkscreen::learn {

enum class Family { ElasticNet, RandomForest, Svm };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

// One point of the tuning grid. Only the fields of `family` are meaningful.
struct Hyperparams {
  Family family = Family::ElasticNet;
  ElasticNetParams elastic_net;
  int max_depth = 2;
  int max_features = 2;
  SvmParams svm;

  std::string describe() const;
  friend bool operator==(const Hyperparams& a, const Hyperparams& b);
};

struct FitSettings {
  int n_trees = 100;
  std::uint64_t seed = 0;
};

using Model = std::variant<ElasticNetGLM, RandomForestModel, SVMModel>;

// Classification fits use balanced class weights over the labels in y.
Model fit_model(Task task, const Hyperparams& hp, const Eigen::Ref<const Matrix>& X,
                const Eigen::Ref<const Vector>& y, int n_classes, const FitSettings& settings);

// Classification: N x K scores whose per-column ordering ranks class
// membership (probabilities for elastic net and forest, decision values for
// SVM). Regression: N x 1 predictions.
Matrix model_scores(const Model& model, const Eigen::Ref<const Matrix>& X);

// Classification only: rows sum to one. SVM decision values are mapped
// through a softmax over the score columns since the solver is uncalibrated.
Matrix model_probabilities(const Model& model, const Eigen::Ref<const Matrix>& X);

Family model_family(const Model& model);

}  // namespace inkscreen::learn
