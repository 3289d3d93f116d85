#pragma once

#include <string_view>
#include <vector>

#include "inkscreen/learn/common.hpp"

namespace inkscreen::learn {

enum class Kernel { Linear, Rbf };

std::string_view kernel_name(Kernel k);

struct SvmParams {
  Kernel kernel = Kernel::Rbf;
  double C = 1.0;
  double gamma = 0.1;    // rbf only: k(u,v) = exp(-gamma |u-v|^2)
  double epsilon = 0.1;  // regression tube half-width
};

struct SvmOptions {
  double tol = 1e-3;               // maximal KKT violation at convergence
  long max_passes = 10000;         // iteration cap is max_passes * n
};

double kernel_value(const SvmParams& params, const Eigen::Ref<const Eigen::RowVectorXd>& u,
                    const Eigen::Ref<const Eigen::RowVectorXd>& v);

// f(x) = sum_i coef_i k(sv_i, x) - rho
struct SvmMachine {
  Matrix support_vectors;
  Vector coef;
  double rho = 0.0;
};

// Full dual state of a binary fit, kept for diagnostics and tests.
struct SvmDual {
  SvmMachine machine;
  Vector alpha;        // one per training row
  Vector upper_bound;  // C * normalized sample weight
  Vector labels;       // +1 / -1
  double max_violation = 0.0;
  long iterations = 0;
};

// Class-weighted soft-margin dual solved by SMO with second-order working-set
// selection. y holds +1/-1; weights scale the per-sample box C * w_i.
SvmDual fit_svm_dual(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                     const SvmParams& params, const Eigen::Ref<const Vector>& sample_weights,
                     const SvmOptions& options = {});

// epsilon-insensitive regression on the same solver (2n dual variables).
SvmMachine fit_svr(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                   const SvmParams& params, const SvmOptions& options = {});

Vector svm_decision(const SvmMachine& machine, const SvmParams& params,
                    const Eigen::Ref<const Matrix>& X);

struct SVMModel {
  Task task = Task::Classification;
  SvmParams params;
  int n_classes = 0;
  Index n_features = 0;
  // Binary: one machine (positive = class 1). Multiclass: one-vs-rest.
  std::vector<SvmMachine> machines;
};

SVMModel fit_svm(Task task, const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                 int n_classes, const SvmParams& params,
                 const Eigen::Ref<const Vector>& sample_weights, const SvmOptions& options = {});

// Classification: N x K ranking scores (binary: [-f, f]). Regression: N x 1.
Matrix svm_scores(const SVMModel& model, const Eigen::Ref<const Matrix>& X);

}  // namespace inkscreen::learn
