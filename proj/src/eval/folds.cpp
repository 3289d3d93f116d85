#include "inkscreen/eval/folds.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "inkscreen/error.hpp"

namespace inkscreen::eval {

using learn::Index;

std::vector<int> stratified_kfold(const Eigen::Ref<const learn::Vector>& y, learn::Task task, int k,
                                  std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(y.size());
  if (k < 2) throw Error(ErrorCode::BadSpec, "fold count must be >= 2");
  if (n < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewPerClass, "fewer samples than folds");
  }

  std::vector<int> strata(n);
  if (task == learn::Task::Classification) {
    for (std::size_t i = 0; i < n; ++i) strata[i] = static_cast<int>(y(static_cast<Index>(i)));
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return y(static_cast<Index>(a)) < y(static_cast<Index>(b));
    });
    for (std::size_t r = 0; r < n; ++r) strata[order[r]] = static_cast<int>(r * 5 / n);
  }

  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[strata[i]].push_back(i);
  if (task == learn::Task::Classification) {
    for (const auto& [label, rows] : members) {
      if (rows.size() < static_cast<std::size_t>(k)) {
        throw Error(ErrorCode::TooFewPerClass, "class " + std::to_string(label) + " has " +
                                                   std::to_string(rows.size()) + " members for " +
                                                   std::to_string(k) + " folds");
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<int> folds(n, -1);
  std::size_t deal = 0;
  for (auto& [label, rows] : members) {
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t row : rows) folds[row] = static_cast<int>(deal++ % static_cast<std::size_t>(k));
  }
  return folds;
}

std::vector<Index> fold_rows(const std::vector<int>& folds, int fold, bool test) {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if ((folds[i] == fold) == test) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

}  // namespace inkscreen::eval
