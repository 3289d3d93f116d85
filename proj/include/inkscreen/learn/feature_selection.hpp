#pragma once

#include <vector>

#include "inkscreen/learn/common.hpp"

namespace inkscreen::learn {

enum class SelectorFlavor { Logistic, Lasso };

inline constexpr double kDefaultSelectionC = 0.1;
inline constexpr Index kFallbackFeatureCount = 10;

// L1-penalized GLM (l1_ratio = 1) at strength selection_C. Returns the sorted
// indices of features with |w| > 1e-8, unioned over one-vs-rest fits for
// multiclass targets. If nothing survives, the kFallbackFeatureCount features
// with the largest |w| are returned, ties ordered by the magnitude of the loss
// gradient at the fit and then by index.
std::vector<Index> l1_select_features(const Eigen::Ref<const Matrix>& X,
                                      const Eigen::Ref<const Vector>& y, SelectorFlavor flavor,
                                      int n_classes, double selection_C,
                                      const Eigen::Ref<const Vector>& sample_weights);

}  // namespace inkscreen::learn
