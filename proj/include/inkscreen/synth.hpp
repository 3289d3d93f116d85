#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "inkscreen/stroke_model.hpp"

namespace inkscreen::synth {

// Waypoint polylines in millimeters; each polyline is drawn as one intended
// stroke with the pen lifted in between.
using Polyline = std::vector<Eigen::Vector2d>;

struct TaskTemplate {
  TaskKind task = TaskKind::Sentence;
  std::string instruction;
  std::vector<Polyline> strokes;
  // TMT only: target centers and their labels in visiting order.
  std::vector<Eigen::Vector2d> targets;
  std::vector<std::string> target_labels;
};

struct TaskLayouts {
  double canvas_width = 200.0;   // mm
  double canvas_height = 150.0;  // mm
  std::array<TaskTemplate, 5> tasks;

  const TaskTemplate& at(TaskKind task) const { return tasks[task_index(task)]; }
  TaskTemplate& at(TaskKind task) { return tasks[task_index(task)]; }
};

// Built-in layouts: two overlapping pentagons, a clock at ten o'clock, three
// scribbled words, 25 TMT-A numbers and 13 numbers / 12 letters for TMT-B.
const TaskLayouts& default_layouts();

nlohmann::json layouts_to_json(const TaskLayouts& layouts);
// Throws Error(BadSpec) on a malformed layout document.
TaskLayouts layouts_from_json(const nlohmann::json& j);

// Parameters are given at the two ends of the impairment axis and linearly
// interpolated at theta.
struct CohortSpec {
  double theta = 0.0;
  double sampling_hz = 150.0;

  double speed_mean_healthy = 70.0;  // mm/s
  double speed_mean_impaired = 30.0;
  double speed_cv = 0.15;            // between-stroke spread of the base speed
  double speed_jitter_healthy = 0.05;  // within-stroke relative jitter
  double speed_jitter_impaired = 0.25;

  double tremor_rate_healthy = 0.05;  // oscillation cycles per mm
  double tremor_rate_impaired = 0.6;
  double tremor_amplitude = 0.15;  // mm

  double extra_pauses_healthy = 0.0;  // expected extra pen lifts per task
  double extra_pauses_impaired = 6.0;
  double pause_log_mean_healthy = -1.6;  // log-seconds
  double pause_log_mean_impaired = -0.2;
  double pause_log_sd = 0.35;

  double pressure_mean = 0.55;
  double pressure_cv = 0.12;
  double tilt_drift_sd = 0.15;  // degrees per sample

  TaskLayouts layouts = default_layouts();

  double speed_mean() const;
  double speed_jitter() const;
  double tremor_rate() const;
  double extra_pauses() const;
  double pause_log_mean() const;

  // Throws Error(BadSpec) when a parameter is out of range or an effect
  // channel runs in the wrong direction.
  void validate() const;
};

// Overrides of the CohortSpec defaults keyed by field name ("theta",
// "speed_mean_healthy", ...); "layouts" takes a layout document. Unknown keys
// throw Error(BadSpec).
CohortSpec cohort_spec_from_json(const nlohmann::json& j);

struct Labels {
  Diagnosis diagnosis = Diagnosis::CN;
  int mmse = 30;
  double mtl_atrophy_z = 0.0;
};

Diagnosis diagnosis_for(double theta);

// mmse = round(29 - 10θ + N(0,1)) clamped to [0,30]; mtl = 0.8 + 1.4θ + N(0,0.3).
Labels draw_labels(double theta, std::uint64_t seed);

// Session id is derived from the seed; subject labels come from draw_labels.
DrawingSession generate_session(const CohortSpec& spec, std::uint64_t seed);

struct FixedTheta {
  double theta = 0.0;
};
struct UniformTheta {
  double low = 0.0;
  double high = 1.0;
};
// counts[i] sessions drawn uniformly inside bands[i]; counts must sum to n.
struct StratifiedTheta {
  std::vector<int> counts;
  std::vector<std::array<double, 2>> bands;
};
using ThetaDistribution = std::variant<FixedTheta, UniformTheta, StratifiedTheta>;

// 46 / 67 / 32 sessions in bands well inside the CN / MCI / DEMENTIA ranges.
StratifiedTheta reference_strata();

struct CohortMember {
  double theta = 0.0;
  DrawingSession session;
};

struct Cohort {
  std::vector<CohortMember> members;
};

// Session ids are "subj-0001" ... in generation order.
Cohort generate_cohort(int n, const ThetaDistribution& distribution, std::uint64_t seed,
                       const CohortSpec& base = {});

// session_id,diagnosis,mmse,mtl_atrophy_z
void write_labels_csv(std::ostream& out, const Cohort& cohort);

}  // namespace inkscreen::synth
