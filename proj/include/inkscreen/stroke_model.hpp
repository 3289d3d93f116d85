#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace inkscreen {

enum class TaskKind { Sentence, Pentagon, TmtA, TmtB, Cdt };

inline constexpr std::array<TaskKind, 5> kAllTasks = {
    TaskKind::Sentence, TaskKind::Pentagon, TaskKind::TmtA, TaskKind::TmtB, TaskKind::Cdt};

std::string_view task_name(TaskKind task);
std::optional<TaskKind> parse_task_name(std::string_view name);
inline std::size_t task_index(TaskKind task) { return static_cast<std::size_t>(task); }

enum class Diagnosis { CN, MCI, Dementia };

std::string_view diagnosis_name(Diagnosis d);
std::optional<Diagnosis> parse_diagnosis(std::string_view name);

// One digitizer report. Times are milliseconds from task start, positions are
// millimeters, tilt is tilt-x/tilt-y in degrees.
struct PenSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double pressure = 0.0;
  double tilt_x = 0.0;
  double tilt_y = 0.0;
  bool pen_down = false;

  friend bool operator==(const PenSample&, const PenSample&) = default;
};

// Maximal pen-down run. path_length is in millimeters, duration in seconds.
struct Stroke {
  std::vector<PenSample> samples;
  double path_length = 0.0;
  double duration = 0.0;

  // Fewer than three samples cannot carry central differences.
  bool derivative_eligible() const { return samples.size() >= 3; }
};

// Seconds from the last sample of one stroke to the first sample of the next.
struct Pause {
  double duration = 0.0;
};

struct Segmentation {
  std::vector<Stroke> strokes;
  std::vector<Pause> pauses;
};

// Splits a time-ordered sample stream into strokes and the pen-up gaps between
// them. Hover samples only bound pauses through their absence from strokes.
Segmentation segment_strokes(std::span<const PenSample> samples);

class TaskRecording {
 public:
  TaskRecording(TaskKind task, std::vector<PenSample> samples);

  TaskKind task() const { return task_; }
  const std::vector<PenSample>& samples() const { return samples_; }
  const std::vector<Stroke>& strokes() const { return segmentation_.strokes; }
  const std::vector<Pause>& pauses() const { return segmentation_.pauses; }

 private:
  TaskKind task_;
  std::vector<PenSample> samples_;
  Segmentation segmentation_;
};

struct SubjectRecord {
  std::optional<Diagnosis> diagnosis;
  std::optional<int> mmse;
  std::optional<double> mtl_atrophy_z;
};

struct DrawingSession {
  std::string session_id;
  std::optional<SubjectRecord> subject;
  std::vector<TaskRecording> recordings;

  const TaskRecording* find(TaskKind task) const;
};

// Parses and validates the JSON session format; throws Error with
// MalformedInput, RangeViolation, NonMonotonicTime or EmptySession.
DrawingSession parse_session(std::string_view bytes);

// Inverse of parse_session. Doubles are written with round-trip precision.
std::string serialize_session(const DrawingSession& session);

struct ValidationReport {
  std::vector<TaskKind> missing_tasks;
  std::vector<TaskKind> zero_stroke_tasks;
  // (task, number of strokes with fewer than three samples)
  std::vector<std::pair<TaskKind, std::size_t>> derivative_ineligible;

  bool empty() const {
    return missing_tasks.empty() && zero_stroke_tasks.empty() && derivative_ineligible.empty();
  }
};

ValidationReport validate_session(const DrawingSession& session);

}  // namespace inkscreen
