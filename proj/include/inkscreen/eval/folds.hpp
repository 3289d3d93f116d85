#pragma once

#include <cstdint>
#include <vector>

#include "inkscreen/learn/common.hpp"

namespace inkscreen::eval {

// Fold id (0..k-1) per sample. Classification strata are the labels;
// regression targets are stratified by quintile bins of their rank. Each
// stratum is shuffled with the seed and dealt round-robin, continuing the deal
// across strata so fold sizes differ by at most one.
std::vector<int> stratified_kfold(const Eigen::Ref<const learn::Vector>& y, learn::Task task, int k,
                                  std::uint64_t seed);

// Row indices of the samples with (test) or without (train) the given fold id.
std::vector<learn::Index> fold_rows(const std::vector<int>& folds, int fold, bool test);

}  // namespace inkscreen::eval
