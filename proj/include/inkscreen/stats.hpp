#pragma once

// Small descriptive statistics over Eigen vectors. "Missing" results are
// reported as an empty optional instead of NaN so callers must decide.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace inkscreen::stats {

template <typename Derived>
typename Derived::Scalar sample_sd(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = v.size();
  if (n < 2) return Scalar(0);
  const Scalar m = v.derived().mean();
  return std::sqrt((v.derived().array() - m).square().sum() / Scalar(n - 1));
}

// Even counts average the two central values.
template <typename Scalar>
std::optional<Scalar> median(std::vector<Scalar> values) {
  if (values.empty()) return std::nullopt;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const Scalar upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const Scalar lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / Scalar(2);
}

template <typename Derived>
std::optional<typename Derived::Scalar> median(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> values(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) values[i] = v.derived()(i);
  return median(std::move(values));
}

// Sample SD over mean. Missing for fewer than two values or when the mean is
// negligible relative to the largest magnitude; an exactly constant series
// has CV 0.
template <typename Derived>
std::optional<typename Derived::Scalar> cv(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() < 2) return std::nullopt;
  const Scalar sd = sample_sd(v);
  if (sd == Scalar(0)) return Scalar(0);
  const Scalar m = v.derived().mean();
  const Scalar scale = v.derived().cwiseAbs().maxCoeff();
  if (std::abs(m) < Scalar(1e-12) * scale) return std::nullopt;
  return sd / m;
}

// Interior strict extrema after collapsing runs of equal values, so a plateau
// between a rise and a fall counts once.
template <typename Derived>
std::size_t count_local_extrema(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> runs;
  runs.reserve(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar x = v.derived()(i);
    if (runs.empty() || runs.back() != x) runs.push_back(x);
  }
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
    const bool peak = runs[i] > runs[i - 1] && runs[i] > runs[i + 1];
    const bool trough = runs[i] < runs[i - 1] && runs[i] < runs[i + 1];
    count += (peak || trough) ? 1 : 0;
  }
  return count;
}

}  // namespace inkscreen::stats
