#pragma once

#include "inkscreen/learn/common.hpp"

namespace inkscreen::learn {

// Train-fold statistics: median imputation followed by z-scoring. Missing
// entries are NaN.
struct Preprocessor {
  Vector median;
  Vector mean;
  Vector scale;  // population SD, 1 for constant columns

  Index n_features() const { return median.size(); }
};

Preprocessor fit_preprocessor(const Eigen::Ref<const Matrix>& X);
Matrix apply_preprocessor(const Preprocessor& pp, const Eigen::Ref<const Matrix>& X);

}  // namespace inkscreen::learn
