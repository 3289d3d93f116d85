#include "inkscreen/learn/random_forest.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "inkscreen/error.hpp"

namespace inkscreen::learn {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(Task task, const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
              int n_classes, const ForestParams& params, std::mt19937_64& rng)
      : task_(task), X_(X), y_(y), n_classes_(n_classes), params_(params), rng_(rng) {}

  DecisionTree build(const Vector& weights) {
    weights_ = &weights;
    tree_ = DecisionTree{};
    std::vector<Index> rows;
    for (Index i = 0; i < weights.size(); ++i) {
      if (weights(i) > 0.0) rows.push_back(i);
    }
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  Vector node_value(const std::vector<Index>& rows) const {
    const Vector& w = *weights_;
    if (task_ == Task::Regression) {
      double sw = 0.0, swy = 0.0;
      for (Index i : rows) {
        sw += w(i);
        swy += w(i) * y_(i);
      }
      return Vector::Constant(1, swy / sw);
    }
    Vector dist = Vector::Zero(n_classes_);
    for (Index i : rows) dist(static_cast<Index>(y_(i))) += w(i);
    return dist / dist.sum();
  }

  // Larger is better; the impurity decrease is (split score - parent score).
  double parent_score(const std::vector<Index>& rows) const {
    const Vector& w = *weights_;
    if (task_ == Task::Regression) {
      double sw = 0.0, swy = 0.0;
      for (Index i : rows) {
        sw += w(i);
        swy += w(i) * y_(i);
      }
      return swy * swy / sw;
    }
    Vector counts = Vector::Zero(n_classes_);
    double total = 0.0;
    for (Index i : rows) {
      counts(static_cast<Index>(y_(i))) += w(i);
      total += w(i);
    }
    return counts.squaredNorm() / total;
  }

  Split best_split_on(int feature, std::vector<Index> rows) const {
    const Vector& w = *weights_;
    std::sort(rows.begin(), rows.end(), [&](Index a, Index b) {
      return X_(a, feature) < X_(b, feature) || (X_(a, feature) == X_(b, feature) && a < b);
    });
    Split best;
    best.score = -1.0;
    const std::size_t n = rows.size();
    if (task_ == Task::Regression) {
      double total_w = 0.0, total_wy = 0.0;
      for (Index i : rows) {
        total_w += w(i);
        total_wy += w(i) * y_(i);
      }
      double lw = 0.0, lwy = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        lw += w(rows[k]);
        lwy += w(rows[k]) * y_(rows[k]);
        const double a = X_(rows[k], feature);
        const double b = X_(rows[k + 1], feature);
        if (a == b) continue;
        const double rw = total_w - lw;
        const double rwy = total_wy - lwy;
        const double score = lwy * lwy / lw + rwy * rwy / rw;
        if (score > best.score) best = Split{feature, 0.5 * (a + b), score};
      }
      return best;
    }
    Vector total = Vector::Zero(n_classes_);
    for (Index i : rows) total(static_cast<Index>(y_(i))) += w(i);
    const double total_w = total.sum();
    Vector left = Vector::Zero(n_classes_);
    double lw = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left(static_cast<Index>(y_(rows[k]))) += w(rows[k]);
      lw += w(rows[k]);
      const double a = X_(rows[k], feature);
      const double b = X_(rows[k + 1], feature);
      if (a == b) continue;
      const double rw = total_w - lw;
      const double score = left.squaredNorm() / lw + (total - left).squaredNorm() / rw;
      if (score > best.score) best = Split{feature, 0.5 * (a + b), score};
    }
    return best;
  }

  int grow(const std::vector<Index>& rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});
    tree_.nodes[static_cast<std::size_t>(id)].value = node_value(rows);
    if (depth >= params_.max_depth || rows.size() < 2) return id;

    const double parent = parent_score(rows);
    const auto p = static_cast<int>(X_.cols());
    std::vector<int> features(static_cast<std::size_t>(p));
    std::iota(features.begin(), features.end(), 0);
    const int draws = std::min(params_.max_features, p);
    for (int k = 0; k < draws; ++k) {
      std::uniform_int_distribution<int> pick(k, p - 1);
      std::swap(features[static_cast<std::size_t>(k)], features[static_cast<std::size_t>(pick(rng_))]);
    }
    Split best;
    best.score = -1.0;
    for (int k = 0; k < draws; ++k) {
      const Split s = best_split_on(features[static_cast<std::size_t>(k)], rows);
      if (s.feature >= 0 && s.score > best.score) best = s;
    }
    if (best.feature < 0 || !(best.score > parent + 1e-12 * std::abs(parent))) return id;

    std::vector<Index> left_rows, right_rows;
    for (Index i : rows) {
      (X_(i, best.feature) <= best.threshold ? left_rows : right_rows).push_back(i);
    }
    const int left = grow(left_rows, depth + 1);
    const int right = grow(right_rows, depth + 1);
    TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Task task_;
  Eigen::Ref<const Matrix> X_;
  Eigen::Ref<const Vector> y_;
  int n_classes_;
  ForestParams params_;
  std::mt19937_64& rng_;
  const Vector* weights_ = nullptr;
  DecisionTree tree_;
};

int subtree_depth(const DecisionTree& tree, int node) {
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.feature < 0) return 0;
  return 1 + std::max(subtree_depth(tree, n.left), subtree_depth(tree, n.right));
}

}  // namespace

int DecisionTree::depth() const { return nodes.empty() ? 0 : subtree_depth(*this, 0); }

const Vector& DecisionTree::leaf_value(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  std::size_t id = 0;
  while (nodes[id].feature >= 0) {
    const TreeNode& n = nodes[id];
    id = static_cast<std::size_t>(x(n.feature) <= n.threshold ? n.left : n.right);
  }
  return nodes[id].value;
}

RandomForestModel fit_random_forest(Task task, const Eigen::Ref<const Matrix>& X,
                                    const Eigen::Ref<const Vector>& y, int n_classes,
                                    const ForestParams& params,
                                    const Eigen::Ref<const Vector>& sample_weights) {
  if (params.max_depth < 1 || params.max_depth > 32) {
    throw Error(ErrorCode::BadDepth, "max_depth must lie in [1,32]");
  }
  if (params.max_features < 1) throw Error(ErrorCode::BadMaxFeatures, "max_features must be >= 1");
  if (params.n_trees < 1) throw Error(ErrorCode::BadSpec, "n_trees must be >= 1");
  if (X.rows() == 0) throw Error(ErrorCode::NoRows, "no training rows");
  if (X.rows() != y.size() || sample_weights.size() != y.size()) {
    throw Error(ErrorCode::ShapeMismatch, "X, y and weights disagree on row count");
  }
  if (!X.allFinite() || !y.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite training input");
  if (task == Task::Classification && n_classes < 1) {
    throw Error(ErrorCode::ShapeMismatch, "classification needs n_classes >= 1");
  }

  RandomForestModel model;
  model.task = task;
  model.n_classes = task == Task::Classification ? n_classes : 0;
  model.n_features = X.cols();
  model.params = params;
  const Vector s = normalized_weights(sample_weights);
  const auto n = static_cast<std::size_t>(X.rows());

  for (int t = 0; t < params.n_trees; ++t) {
    std::mt19937_64 rng(mix_seed(params.seed, static_cast<std::uint64_t>(t)));
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    Vector weights = Vector::Zero(X.rows());
    for (std::size_t k = 0; k < n; ++k) weights(static_cast<Index>(draw(rng))) += 1.0;
    weights.array() *= s.array();
    TreeBuilder builder(task, X, y, n_classes, params, rng);
    model.trees.push_back(builder.build(weights));
  }
  return model;
}

Matrix rf_predict(const RandomForestModel& model, const Eigen::Ref<const Matrix>& X) {
  if (X.cols() != model.n_features) throw Error(ErrorCode::ShapeMismatch, "feature count differs from fit");
  const Index width = model.task == Task::Classification ? model.n_classes : 1;
  Matrix out = Matrix::Zero(X.rows(), width);
  for (Index i = 0; i < X.rows(); ++i) {
    for (const DecisionTree& tree : model.trees) out.row(i) += tree.leaf_value(X.row(i)).transpose();
  }
  out /= static_cast<double>(model.trees.size());
  return out;
}

}  // namespace inkscreen::learn
