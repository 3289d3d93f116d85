#include "inkscreen/learn/feature_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "inkscreen/learn/elastic_net.hpp"

namespace inkscreen::learn {

std::vector<Index> l1_select_features(const Eigen::Ref<const Matrix>& X,
                                      const Eigen::Ref<const Vector>& y, SelectorFlavor flavor,
                                      int n_classes, double selection_C,
                                      const Eigen::Ref<const Vector>& sample_weights) {
  const ElasticNetParams params{1.0, selection_C};
  const GlmFlavor glm = flavor == SelectorFlavor::Logistic ? GlmFlavor::Logistic : GlmFlavor::Linear;
  const ElasticNetGLM model = fit_elastic_net(glm, X, y, n_classes, params, sample_weights);
  const Vector s = normalized_weights(sample_weights);

  const Index p = X.cols();
  Vector max_weight = Vector::Zero(p);
  Vector max_gradient = Vector::Zero(p);
  for (std::size_t k = 0; k < model.predictors.size(); ++k) {
    const LinearPredictor& lp = model.predictors[k];
    Vector target = y;
    if (glm == GlmFlavor::Logistic && model.predictors.size() > 1) {
      target = (y.array() == static_cast<double>(k)).cast<double>();
    }
    Vector residual = lp.eta(X);
    if (glm == GlmFlavor::Logistic) residual = residual.unaryExpr([](double e) { return sigmoid(e); });
    residual -= target;
    const Vector gradient = X.transpose() * (s.array() * residual.array()).matrix();
    max_weight = max_weight.cwiseMax(lp.weights.cwiseAbs());
    max_gradient = max_gradient.cwiseMax(gradient.cwiseAbs());
  }

  std::vector<Index> selected;
  for (Index j = 0; j < p; ++j) {
    if (max_weight(j) > 1e-8) selected.push_back(j);
  }
  if (!selected.empty()) return selected;

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (max_weight(a) != max_weight(b)) return max_weight(a) > max_weight(b);
    return max_gradient(a) > max_gradient(b);
  });
  order.resize(static_cast<std::size_t>(std::min(p, kFallbackFeatureCount)));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace inkscreen::learn
