#pragma once

#include <Eigen/Core>
#include <span>

namespace inkscreen::eval {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Labels are integer-valued doubles 0..K-1 throughout.

double accuracy(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted);

// Rows are true classes, columns predicted classes.
Eigen::MatrixXi confusion_matrix(const Eigen::Ref<const Vector>& truth,
                                 const Eigen::Ref<const Vector>& predicted, int n_classes);

// Recall of `positive`.
double sensitivity(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
                   int positive);
// Recall of everything that is not `positive`.
double specificity(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
                   int positive);
double f1_score(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
                int positive);

// Rank statistic (Mann-Whitney U); tied scores contribute one half. Throws
// DegenerateAUC when only one class is present.
double roc_auc(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& scores,
               int positive = 1);

// Unweighted mean of one-vs-rest AUCs, column k scoring class k.
double macro_auc(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Matrix>& scores);

double r2_score(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted);
double mean_absolute_error(const Eigen::Ref<const Vector>& truth,
                           const Eigen::Ref<const Vector>& predicted);
double root_mean_squared_error(const Eigen::Ref<const Vector>& truth,
                               const Eigen::Ref<const Vector>& predicted);

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Normal approximation: mean +/- 1.96 * sd / sqrt(n), sample SD.
Interval ci95(std::span<const double> values);

}  // namespace inkscreen::eval
