#include "inkscreen/learn/common.hpp"

#include <cmath>

#include "inkscreen/error.hpp"

namespace inkscreen::learn {

Vector ClassWeights::sample_weights(const Eigen::Ref<const Vector>& y) const {
  Vector w(y.size());
  for (Index i = 0; i < y.size(); ++i) w(i) = per_class(static_cast<Index>(y(i)));
  return w;
}

ClassWeights balanced_class_weights(const Eigen::Ref<const Vector>& y, int n_classes) {
  if (y.size() == 0) throw Error(ErrorCode::EmptyLabels, "no labels");
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_classes);
  for (Index i = 0; i < y.size(); ++i) {
    const auto c = static_cast<Index>(y(i));
    if (c < 0 || c >= n_classes || static_cast<double>(c) != y(i)) {
      throw Error(ErrorCode::ShapeMismatch, "label outside 0..K-1");
    }
    ++counts(c);
  }
  const auto present = static_cast<double>((counts.array() > 0).count());
  const auto n = static_cast<double>(y.size());
  ClassWeights w;
  w.per_class = Vector::Zero(n_classes);
  for (int c = 0; c < n_classes; ++c) {
    if (counts(c) > 0) w.per_class(c) = n / (present * counts(c));
  }
  return w;
}

Vector normalized_weights(const Eigen::Ref<const Vector>& weights) {
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::NonFinite, "sample weights must have a positive finite sum");
  }
  return weights * (static_cast<double>(weights.size()) / total);
}

Matrix select_rows(const Eigen::Ref<const Matrix>& X, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = X.row(rows[i]);
  return out;
}

Vector select_entries(const Eigen::Ref<const Vector>& y, std::span<const Index> rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Index>(i)) = y(rows[i]);
  return out;
}

Matrix select_cols(const Eigen::Ref<const Matrix>& X, std::span<const Index> cols) {
  Matrix out(X.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = X.col(cols[j]);
  return out;
}

int class_count(const Eigen::Ref<const Vector>& y) {
  if (y.size() == 0) return 0;
  return static_cast<int>(y.maxCoeff()) + 1;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace inkscreen::learn
