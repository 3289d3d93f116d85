#pragma once

#include <nlohmann/json.hpp>

#include "inkscreen/eval/nested_cv.hpp"

namespace inkscreen::eval {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json hyperparams_to_json(const Hyperparams& hp);
Hyperparams hyperparams_from_json(const nlohmann::json& j);

// {"schema_version", "task", "metrics": {name: {mean, ci95: [lo, hi], per_repeat}},
//  "confusion_matrix", "fold_choices", "seed"}
nlohmann::json to_json(const CVResult& result);
nlohmann::json to_json(const PermutationResult& result);

}  // namespace inkscreen::eval
