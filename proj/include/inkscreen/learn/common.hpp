#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace inkscreen::learn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Classification targets are stored as integer-valued doubles 0..K-1.
enum class Task { Classification, Regression };

struct ClassWeights {
  Vector per_class;  // zero for classes absent from the labels

  Vector sample_weights(const Eigen::Ref<const Vector>& y) const;
};

// w_c = N / (K * N_c) with K the number of classes present in y.
ClassWeights balanced_class_weights(const Eigen::Ref<const Vector>& y, int n_classes);

// Rescales weights to mean one. Fitters call this so that multiplying every
// weight by a constant does not change the fitted model.
Vector normalized_weights(const Eigen::Ref<const Vector>& weights);

Matrix select_rows(const Eigen::Ref<const Matrix>& X, std::span<const Index> rows);
Vector select_entries(const Eigen::Ref<const Vector>& y, std::span<const Index> rows);
Matrix select_cols(const Eigen::Ref<const Matrix>& X, std::span<const Index> cols);

int class_count(const Eigen::Ref<const Vector>& y);

// splitmix64 finalizer; derives independent seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace inkscreen::learn
