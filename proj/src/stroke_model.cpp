#include "inkscreen/stroke_model.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "inkscreen/error.hpp"

namespace inkscreen {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kTaskNames = {"SENTENCE", "PENTAGON", "TMT_A", "TMT_B",
                                                        "CDT"};
constexpr std::array<std::string_view, 3> kDiagnosisNames = {"CN", "MCI", "DEMENTIA"};

void check_samples(TaskKind task, std::span<const PenSample> samples) {
  const auto where = [&](std::size_t i) {
    return std::string(task_name(task)) + " sample " + std::to_string(i);
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const PenSample& s = samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y) ||
        !std::isfinite(s.pressure) || !std::isfinite(s.tilt_x) || !std::isfinite(s.tilt_y)) {
      throw Error(ErrorCode::MalformedInput, where(i) + ": non-finite value");
    }
    if (s.t < 0.0) throw Error(ErrorCode::RangeViolation, where(i) + ": t < 0");
    if (s.pressure < 0.0 || s.pressure > 1.0) {
      throw Error(ErrorCode::RangeViolation, where(i) + ": pressure outside [0,1]");
    }
    if (std::abs(s.tilt_x) > 90.0 || std::abs(s.tilt_y) > 90.0) {
      throw Error(ErrorCode::RangeViolation, where(i) + ": tilt outside [-90,90]");
    }
    if (!s.pen_down && s.pressure != 0.0) {
      throw Error(ErrorCode::RangeViolation, where(i) + ": pen-up sample with nonzero pressure");
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      throw Error(ErrorCode::NonMonotonicTime, where(i) + ": timestamp not strictly increasing");
    }
  }
}

Stroke make_stroke(std::vector<PenSample> samples) {
  Stroke stroke;
  const PenSample& first = samples.front();
  // Differences are taken relative to the first sample so that a rigid shift
  // of the input leaves every derived quantity bit-identical.
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dx = (samples[i].x - first.x) - (samples[i - 1].x - first.x);
    const double dy = (samples[i].y - first.y) - (samples[i - 1].y - first.y);
    stroke.path_length += std::hypot(dx, dy);
  }
  stroke.duration = (samples.back().t - first.t) / 1000.0;
  stroke.samples = std::move(samples);
  return stroke;
}

double number_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw Error(ErrorCode::MalformedInput, std::string("missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

PenSample parse_sample(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "sample is not an object");
  PenSample s;
  s.t = number_field(j, "t");
  s.x = number_field(j, "x");
  s.y = number_field(j, "y");
  s.pressure = number_field(j, "p");
  s.tilt_x = number_field(j, "tx");
  s.tilt_y = number_field(j, "ty");
  const auto d = j.find("d");
  if (d == j.end() || !d->is_boolean()) {
    throw Error(ErrorCode::MalformedInput, "missing boolean field 'd'");
  }
  s.pen_down = d->get<bool>();
  return s;
}

SubjectRecord parse_subject(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "subject is not an object");
  SubjectRecord rec;
  if (const auto it = j.find("diagnosis"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::MalformedInput, "diagnosis is not a string");
    rec.diagnosis = parse_diagnosis(it->get<std::string>());
    if (!rec.diagnosis) {
      throw Error(ErrorCode::MalformedInput, "unknown diagnosis '" + it->get<std::string>() + "'");
    }
  }
  if (const auto it = j.find("mmse"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw Error(ErrorCode::MalformedInput, "mmse is not an integer");
    const auto v = it->get<long long>();
    if (v < 0 || v > 30) throw Error(ErrorCode::RangeViolation, "mmse outside [0,30]");
    rec.mmse = static_cast<int>(v);
  }
  if (const auto it = j.find("mtl_atrophy_z"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) throw Error(ErrorCode::MalformedInput, "mtl_atrophy_z is not a number");
    rec.mtl_atrophy_z = it->get<double>();
    if (!std::isfinite(*rec.mtl_atrophy_z)) {
      throw Error(ErrorCode::MalformedInput, "mtl_atrophy_z is not finite");
    }
  }
  return rec;
}

}  // namespace

std::string_view task_name(TaskKind task) { return kTaskNames[task_index(task)]; }

std::optional<TaskKind> parse_task_name(std::string_view name) {
  for (TaskKind t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view diagnosis_name(Diagnosis d) { return kDiagnosisNames[static_cast<std::size_t>(d)]; }

std::optional<Diagnosis> parse_diagnosis(std::string_view name) {
  for (std::size_t i = 0; i < kDiagnosisNames.size(); ++i) {
    if (kDiagnosisNames[i] == name) return static_cast<Diagnosis>(i);
  }
  return std::nullopt;
}

Segmentation segment_strokes(std::span<const PenSample> samples) {
  Segmentation out;
  std::vector<PenSample> run;
  double last_down_t = 0.0;
  for (const PenSample& s : samples) {
    if (s.pen_down) {
      if (run.empty() && !out.strokes.empty()) {
        out.pauses.push_back(Pause{(s.t - last_down_t) / 1000.0});
      }
      run.push_back(s);
    } else if (!run.empty()) {
      last_down_t = run.back().t;
      out.strokes.push_back(make_stroke(std::move(run)));
      run.clear();
    }
  }
  if (!run.empty()) out.strokes.push_back(make_stroke(std::move(run)));
  return out;
}

TaskRecording::TaskRecording(TaskKind task, std::vector<PenSample> samples)
    : task_(task), samples_(std::move(samples)) {
  check_samples(task_, samples_);
  segmentation_ = segment_strokes(samples_);
}

const TaskRecording* DrawingSession::find(TaskKind task) const {
  for (const TaskRecording& r : recordings) {
    if (r.task() == task) return &r;
  }
  return nullptr;
}

DrawingSession parse_session(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedInput, "top level is not an object");

  DrawingSession session;
  const auto id = doc.find("session_id");
  if (id == doc.end() || !id->is_string()) {
    throw Error(ErrorCode::MalformedInput, "missing string field 'session_id'");
  }
  session.session_id = id->get<std::string>();

  if (const auto subj = doc.find("subject"); subj != doc.end() && !subj->is_null()) {
    session.subject = parse_subject(*subj);
  }

  const auto tasks = doc.find("tasks");
  if (tasks == doc.end() || !tasks->is_array()) {
    throw Error(ErrorCode::MalformedInput, "missing array field 'tasks'");
  }
  for (const json& entry : *tasks) {
    if (!entry.is_object()) throw Error(ErrorCode::MalformedInput, "task entry is not an object");
    const auto name = entry.find("task");
    if (name == entry.end() || !name->is_string()) {
      throw Error(ErrorCode::MalformedInput, "task entry without 'task' name");
    }
    const auto kind = parse_task_name(name->get<std::string>());
    if (!kind) throw Error(ErrorCode::MalformedInput, "unknown task '" + name->get<std::string>() + "'");
    if (session.find(*kind)) {
      throw Error(ErrorCode::MalformedInput, "duplicate task '" + name->get<std::string>() + "'");
    }
    const auto raw = entry.find("samples");
    if (raw == entry.end() || !raw->is_array()) {
      throw Error(ErrorCode::MalformedInput, "task entry without 'samples' array");
    }
    std::vector<PenSample> samples;
    samples.reserve(raw->size());
    for (const json& s : *raw) samples.push_back(parse_sample(s));
    session.recordings.emplace_back(*kind, std::move(samples));
  }
  if (session.recordings.empty()) throw Error(ErrorCode::EmptySession, "session has no recordings");
  return session;
}

std::string serialize_session(const DrawingSession& session) {
  json doc;
  doc["session_id"] = session.session_id;
  if (session.subject) {
    const SubjectRecord& s = *session.subject;
    json subj;
    subj["diagnosis"] = s.diagnosis ? json(diagnosis_name(*s.diagnosis)) : json(nullptr);
    subj["mmse"] = s.mmse ? json(*s.mmse) : json(nullptr);
    subj["mtl_atrophy_z"] = s.mtl_atrophy_z ? json(*s.mtl_atrophy_z) : json(nullptr);
    doc["subject"] = std::move(subj);
  } else {
    doc["subject"] = nullptr;
  }
  json tasks = json::array();
  for (const TaskRecording& rec : session.recordings) {
    json samples = json::array();
    for (const PenSample& s : rec.samples()) {
      samples.push_back({{"t", s.t},
                         {"x", s.x},
                         {"y", s.y},
                         {"p", s.pressure},
                         {"tx", s.tilt_x},
                         {"ty", s.tilt_y},
                         {"d", s.pen_down}});
    }
    tasks.push_back({{"task", task_name(rec.task())}, {"samples", std::move(samples)}});
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump();
}

ValidationReport validate_session(const DrawingSession& session) {
  ValidationReport report;
  for (TaskKind task : kAllTasks) {
    const TaskRecording* rec = session.find(task);
    if (!rec) {
      report.missing_tasks.push_back(task);
      continue;
    }
    if (rec->strokes().empty()) {
      report.zero_stroke_tasks.push_back(task);
      continue;
    }
    std::size_t short_strokes = 0;
    for (const Stroke& s : rec->strokes()) short_strokes += s.derivative_eligible() ? 0 : 1;
    if (short_strokes > 0) report.derivative_ineligible.emplace_back(task, short_strokes);
  }
  return report;
}

}  // namespace inkscreen
