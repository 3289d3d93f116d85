#pragma once

#include <cstdint>
#include <vector>

#include "inkscreen/learn/common.hpp"

namespace inkscreen::learn {

struct ForestParams {
  int max_depth = 3;
  int max_features = 3;
  int n_trees = 100;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaf output: weighted class distribution, or a single weighted mean.
  Vector value;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at index 0

  int depth() const;
  const Vector& leaf_value(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

struct RandomForestModel {
  Task task = Task::Classification;
  int n_classes = 0;
  Index n_features = 0;
  ForestParams params;
  std::vector<DecisionTree> trees;
};

// CART on a seeded bootstrap per tree. Each split draws max_features candidate
// features without replacement and minimizes weighted Gini impurity
// (classification) or weighted squared error (regression).
RandomForestModel fit_random_forest(Task task, const Eigen::Ref<const Matrix>& X,
                                    const Eigen::Ref<const Vector>& y, int n_classes,
                                    const ForestParams& params,
                                    const Eigen::Ref<const Vector>& sample_weights);

// Classification: N x K averaged leaf distributions. Regression: N x 1.
Matrix rf_predict(const RandomForestModel& model, const Eigen::Ref<const Matrix>& X);

}  // namespace inkscreen::learn
