#include "inkscreen/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "inkscreen/error.hpp"

namespace inkscreen::eval {

namespace {

void check_pair(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() == 0) throw Error(ErrorCode::Empty, "no predictions");
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "truth and predictions differ in length");
}

double recall(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
              int positive, bool of_positive) {
  check_pair(truth, predicted);
  double hit = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    const bool is_pos = truth(i) == positive;
    if (is_pos != of_positive) continue;
    total += 1.0;
    hit += ((predicted(i) == positive) == of_positive) ? 1.0 : 0.0;
  }
  return total > 0.0 ? hit / total : 0.0;
}

}  // namespace

double accuracy(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted) {
  check_pair(truth, predicted);
  return (truth.array() == predicted.array()).cast<double>().mean();
}

Eigen::MatrixXi confusion_matrix(const Eigen::Ref<const Vector>& truth,
                                 const Eigen::Ref<const Vector>& predicted, int n_classes) {
  check_pair(truth, predicted);
  Eigen::MatrixXi cm = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    ++cm(static_cast<Eigen::Index>(truth(i)), static_cast<Eigen::Index>(predicted(i)));
  }
  return cm;
}

double sensitivity(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
                   int positive) {
  return recall(truth, predicted, positive, true);
}

double specificity(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
                   int positive) {
  return recall(truth, predicted, positive, false);
}

double f1_score(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted,
                int positive) {
  check_pair(truth, predicted);
  double tp = 0.0, fp = 0.0, fn = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    const bool t = truth(i) == positive;
    const bool p = predicted(i) == positive;
    tp += (t && p) ? 1.0 : 0.0;
    fp += (!t && p) ? 1.0 : 0.0;
    fn += (t && !p) ? 1.0 : 0.0;
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

double roc_auc(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& scores,
               int positive) {
  check_pair(truth, scores);
  const auto n = static_cast<std::size_t>(truth.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) < scores(static_cast<Eigen::Index>(b));
  });
  // Twice the midrank keeps tied ranks integral.
  double rank2_sum_pos = 0.0;
  double n_pos = 0.0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    const double v = scores(static_cast<Eigen::Index>(order[start]));
    while (end < n && scores(static_cast<Eigen::Index>(order[end])) == v) ++end;
    const double rank2 = static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      if (truth(static_cast<Eigen::Index>(order[k])) == positive) {
        rank2_sum_pos += rank2;
        n_pos += 1.0;
      }
    }
    start = end;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw Error(ErrorCode::DegenerateAUC, "AUC needs both classes");
  const double u2 = rank2_sum_pos - n_pos * (n_pos + 1.0);
  return u2 / (2.0 * n_pos * n_neg);
}

double macro_auc(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Matrix>& scores) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < scores.cols(); ++k) {
    total += roc_auc(truth, scores.col(k), static_cast<int>(k));
  }
  return total / static_cast<double>(scores.cols());
}

double r2_score(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& predicted) {
  check_pair(truth, predicted);
  const double ss_res = (truth - predicted).squaredNorm();
  const double ss_tot = (truth.array() - truth.mean()).square().sum();
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

double mean_absolute_error(const Eigen::Ref<const Vector>& truth,
                           const Eigen::Ref<const Vector>& predicted) {
  check_pair(truth, predicted);
  return (truth - predicted).cwiseAbs().mean();
}

double root_mean_squared_error(const Eigen::Ref<const Vector>& truth,
                               const Eigen::Ref<const Vector>& predicted) {
  check_pair(truth, predicted);
  return std::sqrt((truth - predicted).squaredNorm() / static_cast<double>(truth.size()));
}

Interval ci95(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorCode::TooFew, "confidence interval needs two values");
  const Eigen::Map<const Vector> v(values.data(), static_cast<Eigen::Index>(values.size()));
  const double n = static_cast<double>(values.size());
  // Identical values must give a zero-width interval at exactly that value.
  if ((v.array() == v(0)).all()) return Interval{v(0), v(0), v(0)};
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().sum() / (n - 1.0));
  const double half = 1.96 * sd / std::sqrt(n);
  return Interval{mean, mean - half, mean + half};
}

}  // namespace inkscreen::eval
