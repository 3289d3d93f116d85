#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "inkscreen/eval/nested_cv.hpp"

namespace inkscreen {

// Settings shared by the evaluate / permtest / train / extract commands.
struct RunConfig {
  eval::CVConfig cv;
  int smoothing_window = 5;
};

// Keys: repeats, outer_k, inner_k, families, selection_C,
// regression_selector ("lasso" | "logistic"), n_trees, threads,
// smoothing_window, grid {preset: "full" | "reduced", en_l1_ratio, en_C,
// rf_max_depth, rf_max_features, svm_kernel, svm_C, svm_gamma}.
// Unknown keys and invalid values throw Error(BadSpec).
RunConfig parse_run_config(const nlohmann::json& j, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace inkscreen
