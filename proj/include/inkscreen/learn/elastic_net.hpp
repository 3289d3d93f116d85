#pragma once

#include <functional>
#include <vector>

#include "inkscreen/learn/common.hpp"

namespace inkscreen::learn {

enum class GlmFlavor { Logistic, Linear };

struct ElasticNetParams {
  double l1_ratio = 1.0;  // 1 = lasso, 0 = ridge
  double C = 1.0;         // inverse penalty strength
};

struct ElasticNetOptions {
  double tol = 1e-5;  // max coefficient change over one sweep
  int max_sweeps = 10000;
  // Called after every sweep with the objective value.
  std::function<void(int sweep, double objective)> on_sweep;
};

struct LinearPredictor {
  Vector weights;
  double intercept = 0.0;
  int sweeps = 0;

  Vector eta(const Eigen::Ref<const Matrix>& X) const {
    return (X * weights).array() + intercept;
  }
};

// Penalized objective minimized by the solver:
//   sum_i s_i * loss_i + (1/C) * (a*|w|_1 + (1-a)/2*|w|_2^2)
// with loss the cross-entropy (logistic) or half the squared residual
// (linear), s the mean-one normalized sample weights, and an unpenalized
// intercept.
double glm_objective(GlmFlavor flavor, const LinearPredictor& model,
                     const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                     const Eigen::Ref<const Vector>& sample_weights, const ElasticNetParams& params);

// Cyclic coordinate descent with soft-thresholding. Logistic coordinates take
// a proximal Newton step and fall back to a majorization step whenever the
// Newton step would not decrease the objective, so every coordinate update is
// monotone. y is 0/1 for the logistic flavor.
LinearPredictor fit_glm(GlmFlavor flavor, const Eigen::Ref<const Matrix>& X,
                        const Eigen::Ref<const Vector>& y,
                        const Eigen::Ref<const Vector>& sample_weights,
                        const ElasticNetParams& params, const ElasticNetOptions& options = {});

struct ElasticNetGLM {
  GlmFlavor flavor = GlmFlavor::Logistic;
  ElasticNetParams params;
  int n_classes = 0;  // 0 for the linear flavor
  // One predictor for linear and binary logistic models, one per class for
  // one-vs-rest multiclass.
  std::vector<LinearPredictor> predictors;
};

ElasticNetGLM fit_elastic_net(GlmFlavor flavor, const Eigen::Ref<const Matrix>& X,
                              const Eigen::Ref<const Vector>& y, int n_classes,
                              const ElasticNetParams& params,
                              const Eigen::Ref<const Vector>& sample_weights,
                              const ElasticNetOptions& options = {});

// Logistic: N x K class probabilities (rows sum to one). Linear: N x 1.
Matrix glm_predict(const ElasticNetGLM& model, const Eigen::Ref<const Matrix>& X);

double sigmoid(double z);

}  // namespace inkscreen::learn
