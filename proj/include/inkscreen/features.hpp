#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inkscreen/stroke_model.hpp"

namespace inkscreen::features {

inline constexpr std::size_t kFeaturesPerTask = 38;
inline constexpr std::size_t kSessionFeatures = kFeaturesPerTask * kAllTasks.size();

enum class Family { Kinematic, Pressure, Posture, Pause };

struct FeatureInfo {
  std::string_view name;
  Family family;
};

// Fixed order: 15 kinematic, 8 pressure, 10 posture, 5 pause.
const std::array<FeatureInfo, kFeaturesPerTask>& registry();
std::optional<std::size_t> feature_index(std::string_view name);

// "TASK.feature", task-major then registry order.
std::vector<std::string> session_column_names();

// Power of c by which a feature changes when every position is scaled by
// c > 0: +1 for speed/accel/jerk medians, -1 for per-length extrema rates and
// adjusted_total_duration, 0 for everything else.
int spatial_scaling_exponent(std::size_t feature);

struct ExtractionOptions {
  int smoothing_window = 5;
};

// Identifies the column layout together with the extraction settings that
// change feature values. Bundles refuse to load against a different hash.
std::uint64_t registry_hash(const ExtractionOptions& options = {});

// Centered moving average; windows shrink (truncate) at the series ends.
Eigen::VectorXd smooth(const Eigen::Ref<const Eigen::VectorXd>& series, int window);

// Rows are samples, columns are components. Central differences on the
// nonuniform grid inside, one-sided differences at both ends.
Eigen::MatrixXd differentiate(const Eigen::Ref<const Eigen::MatrixXd>& values,
                              const Eigen::Ref<const Eigen::VectorXd>& t);

// Per-sample series of one derivative-eligible stroke. Rates are per second.
struct KinematicSeries {
  Eigen::VectorXd speed;
  Eigen::VectorXd acceleration;
  Eigen::VectorXd jerk;
  Eigen::VectorXd pressure;
  Eigen::VectorXd pressure_rate;
  Eigen::VectorXd tilt_x;
  Eigen::VectorXd tilt_y;
  Eigen::VectorXd tilt_x_rate;
  Eigen::VectorXd tilt_y_rate;
};

KinematicSeries kinematic_series(const Stroke& stroke, const ExtractionOptions& options = {});

std::optional<double> pooled_median(std::span<const Eigen::VectorXd> per_stroke);
std::optional<double> cv(const Eigen::Ref<const Eigen::VectorXd>& values);
std::optional<double> cv_across_strokes(std::span<const Eigen::VectorXd> per_stroke);
std::optional<double> cv_within_strokes(std::span<const Eigen::VectorXd> per_stroke);
std::size_t count_local_extrema(const Eigen::Ref<const Eigen::VectorXd>& series);

using FeatureValue = std::optional<double>;

// Order: per axis (x then y) sd_across, sd_within, rate_abs_median,
// rate_cv_across, rate_cv_within.
std::array<FeatureValue, 10> posture_features(std::span<const KinematicSeries> eligible);

// Order: pause_mean, pause_cv, n_drawings, pause_drawing_ratio,
// adjusted_total_duration.
std::array<FeatureValue, 5> pause_features(std::span<const Stroke> strokes,
                                           std::span<const Pause> pauses,
                                           double path_length_total);

struct TaskFeatures {
  TaskKind task = TaskKind::Sentence;
  // NaN where missing.
  Eigen::Matrix<double, kFeaturesPerTask, 1> values;
  std::array<bool, kFeaturesPerTask> missing{};

  FeatureValue get(std::string_view name) const;
};

TaskFeatures extract_task_features(const TaskRecording& recording,
                                   const ExtractionOptions& options = {});

struct SessionFeatureVector {
  std::string session_id;
  Eigen::VectorXd values;     // kSessionFeatures entries, NaN where missing
  std::vector<bool> missing;  // kSessionFeatures entries

  std::size_t missing_count() const;
};

SessionFeatureVector extract_session_features(const DrawingSession& session,
                                              const ExtractionOptions& options = {});

}  // namespace inkscreen::features
