#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inkscreen/dataset.hpp"
#include "inkscreen/eval/nested_cv.hpp"

namespace inkscreen::bundle {

inline constexpr int kBundleFormatVersion = 1;

struct TargetModel {
  dataset::Target target = dataset::Target::Diagnosis;
  learn::Task task = learn::Task::Classification;
  int n_classes = 0;
  eval::FittedPipeline pipeline;
  nlohmann::json cv_report;  // null unless trained with cross-validation
};

struct TrainedBundle {
  int format_version = kBundleFormatVersion;
  std::uint64_t registry_hash = 0;
  int smoothing_window = 5;
  TargetModel diagnosis;  // 3-class CN / MCI / DEMENTIA
  TargetModel mmse;
  TargetModel mtl;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::uint64_t dataset_fingerprint = 0;
};

struct TrainOptions {
  eval::CVConfig config;
  int smoothing_window = 5;
  bool with_cv = false;  // also run nested CV and store the reports
  std::string timestamp;
};

// Each target runs the train-only pipeline (preprocess, selection, tuning,
// refit) on every labeled row.
TrainedBundle train_bundle(const dataset::FeatureTable& features, std::span<const dataset::LabelRow> labels,
                           const TrainOptions& options);

nlohmann::json bundle_to_json(const TrainedBundle& bundle);
// Throws BundleVersionMismatch for other format versions and
// RegistryHashMismatch when the bundle was built on a different registry.
TrainedBundle bundle_from_json(const nlohmann::json& j);

void save_bundle(const TrainedBundle& bundle, const std::filesystem::path& path);
TrainedBundle load_bundle(const std::filesystem::path& path);

struct Prediction {
  std::string session_id;
  std::array<double, 3> probabilities{};  // CN, MCI, DEMENTIA
  double mmse = 0.0;                      // clamped to [0, 30]
  double mtl_z = 0.0;
};

std::vector<Prediction> predict(const TrainedBundle& bundle, const dataset::FeatureTable& features);
Prediction predict(const TrainedBundle& bundle, const features::SessionFeatureVector& features);

nlohmann::json to_json(const Prediction& p);

// Model (de)serialization, exposed for tests.
nlohmann::json model_to_json(const learn::Model& model);
learn::Model model_from_json(const nlohmann::json& j);

}  // namespace inkscreen::bundle
