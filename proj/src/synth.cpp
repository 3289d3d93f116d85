#include "inkscreen/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "inkscreen/dataset.hpp"
#include "inkscreen/error.hpp"
#include "inkscreen/learn/common.hpp"

namespace inkscreen::synth {

namespace {

using Eigen::Vector2d;
using learn::mix_seed;
using nlohmann::json;

double lerp(double healthy, double impaired, double theta) {
  return healthy + (impaired - healthy) * theta;
}

// Dyadic grids keep translated/time-shifted copies exactly representable.
double quantize(double v, double steps) { return std::round(v * steps) / steps; }

Polyline regular_polygon(Vector2d center, double radius, int sides, double start_deg) {
  Polyline p;
  for (int k = 0; k <= sides; ++k) {
    const double a = (start_deg + 360.0 * k / sides) * std::numbers::pi / 180.0;
    p.emplace_back(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a));
  }
  return p;
}

// Clock-face direction: 0 degrees points to 12, clockwise, y grows downward.
Vector2d clock_point(Vector2d center, double radius, double clock_deg) {
  const double a = clock_deg * std::numbers::pi / 180.0;
  return {center.x() + radius * std::sin(a), center.y() - radius * std::cos(a)};
}

std::vector<Vector2d> tmt_targets(const std::array<int, 25>& order,
                                  const std::array<double, 25>& dx,
                                  const std::array<double, 25>& dy) {
  std::vector<Vector2d> cells;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const int k = 5 * r + c;
      cells.emplace_back(25.0 + 37.5 * c + dx[k], 20.0 + 27.5 * r + dy[k]);
    }
  }
  std::vector<Vector2d> targets;
  for (int i : order) targets.push_back(cells[i]);
  return targets;
}

// Five strokes of five links each; the pen is lifted at targets 5, 10, ...
std::vector<Polyline> trail_strokes(const std::vector<Vector2d>& targets) {
  std::vector<Polyline> strokes;
  for (std::size_t start = 0; start + 1 < targets.size(); start += 5) {
    const std::size_t end = std::min(start + 5, targets.size() - 1);
    strokes.emplace_back(targets.begin() + static_cast<std::ptrdiff_t>(start),
                         targets.begin() + static_cast<std::ptrdiff_t>(end) + 1);
  }
  return strokes;
}

TaskLayouts build_default_layouts() {
  TaskLayouts L;

  TaskTemplate& sentence = L.at(TaskKind::Sentence) = {};
  sentence.task = TaskKind::Sentence;
  sentence.instruction = "Write a short sentence of your choice.";
  for (int w = 0; w < 3; ++w) {
    Polyline word;
    const double x0 = 20.0 + 55.0 * w;
    for (int k = 0; k <= 24; ++k) {
      const double phase = k * std::numbers::pi / 2.5 + w;
      word.emplace_back(x0 + 1.8 * k + 1.2 * std::sin(phase), 75.0 + 5.0 * std::cos(phase));
    }
    sentence.strokes.push_back(std::move(word));
  }

  TaskTemplate& pentagon = L.at(TaskKind::Pentagon) = {};
  pentagon.task = TaskKind::Pentagon;
  pentagon.instruction = "Copy the two overlapping pentagons.";
  pentagon.strokes.push_back(regular_polygon({82.0, 75.0}, 28.0, 5, -90.0));
  pentagon.strokes.push_back(regular_polygon({118.0, 75.0}, 28.0, 5, -90.0));

  constexpr std::array<double, 25> dx = {3,  -5, 6,  -2, 4,  -6, 2,  5, -3, -4, 7, -1, 0,
                                         -7, 3,  5,  -4, -6, 1, 6,  -2, 4, -5, 2, -3};
  constexpr std::array<double, 25> dy = {-4, 3,  -2, 5,  -6, 2,  -5, 4, 0,  6, -3, -1, 4,
                                         -2, 5,  -4, 3,  1,  -6, 2, 5,  -3, 0, -5, 4};
  constexpr std::array<int, 25> order_a = {12, 17, 22, 16, 11, 6,  7,  13, 8,  3, 2, 1, 0,
                                           5,  10, 15, 20, 21, 23, 18, 19, 24, 14, 9, 4};
  constexpr std::array<int, 25> order_b = {12, 7,  2,  8,  14, 18, 22, 16, 10, 5, 1, 6, 11,
                                           17, 23, 19, 13, 9,  4,  3,  0,  15, 20, 21, 24};

  TaskTemplate& tmt_a = L.at(TaskKind::TmtA) = {};
  tmt_a.task = TaskKind::TmtA;
  tmt_a.instruction = "Connect the circles in ascending order: 1-2-3-...";
  tmt_a.targets = tmt_targets(order_a, dx, dy);
  for (int i = 1; i <= 25; ++i) tmt_a.target_labels.push_back(std::to_string(i));
  tmt_a.strokes = trail_strokes(tmt_a.targets);

  TaskTemplate& tmt_b = L.at(TaskKind::TmtB) = {};
  tmt_b.task = TaskKind::TmtB;
  tmt_b.instruction = "Connect the circles alternating numbers and letters: 1-A-2-B-...";
  tmt_b.targets = tmt_targets(order_b, dx, dy);
  for (int i = 0; i < 25; ++i) {
    tmt_b.target_labels.push_back(i % 2 == 0 ? std::to_string(i / 2 + 1)
                                             : std::string(1, static_cast<char>('A' + i / 2)));
  }
  tmt_b.strokes = trail_strokes(tmt_b.targets);

  TaskTemplate& cdt = L.at(TaskKind::Cdt) = {};
  cdt.task = TaskKind::Cdt;
  cdt.instruction = "Draw an analog clock face with all the numbers, showing 10 o'clock.";
  const Vector2d center(100.0, 75.0);
  Polyline circle;
  for (int k = 0; k <= 48; ++k) circle.push_back(clock_point(center, 45.0, 7.5 * k));
  cdt.strokes.push_back(std::move(circle));
  for (int h = 0; h < 12; ++h) {
    cdt.strokes.push_back({clock_point(center, 38.0, 30.0 * h), clock_point(center, 42.0, 30.0 * h)});
  }
  cdt.strokes.push_back({center, clock_point(center, 22.0, 300.0)});
  cdt.strokes.push_back({center, clock_point(center, 34.0, 0.0)});
  return L;
}

json point_json(const Vector2d& p) { return json::array({p.x(), p.y()}); }

Vector2d point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::BadSpec, "layout point must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

// Arc-length parametrized polyline.
class Path {
 public:
  explicit Path(const Polyline& points) : points_(points), cumulative_(points.size(), 0.0) {
    for (std::size_t i = 1; i < points_.size(); ++i) {
      cumulative_[i] = cumulative_[i - 1] + (points_[i] - points_[i - 1]).norm();
    }
  }

  double length() const { return cumulative_.back(); }

  // Position and unit normal at arc length s.
  std::pair<Vector2d, Vector2d> at(double s) const {
    s = std::clamp(s, 0.0, length());
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin(), 1)) - 1;
    i = std::min(i, points_.size() - 2);
    const Vector2d seg = points_[i + 1] - points_[i];
    const double len = seg.norm();
    const double u = len > 0.0 ? (s - cumulative_[i]) / len : 0.0;
    const Vector2d tangent = len > 0.0 ? Vector2d(seg / len) : Vector2d(1.0, 0.0);
    return {points_[i] + u * seg, Vector2d(-tangent.y(), tangent.x())};
  }

  Polyline slice(double s0, double s1) const {
    Polyline out{at(s0).first};
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (cumulative_[i] > s0 && cumulative_[i] < s1) out.push_back(points_[i]);
    }
    out.push_back(at(s1).first);
    return out;
  }

 private:
  Polyline points_;
  std::vector<double> cumulative_;
};

class TaskSynthesizer {
 public:
  TaskSynthesizer(const CohortSpec& spec, std::uint64_t seed)
      : spec_(spec), rng_(seed), dt_(1.0 / spec.sampling_hz) {
    std::normal_distribution<double> n(0.0, 3.0);
    tilt_x_ = 45.0 + n(rng_);
    tilt_y_ = -10.0 + n(rng_);
  }

  std::vector<PenSample> run(const TaskTemplate& tpl) {
    const std::vector<Polyline> pieces = split_pieces(tpl.strokes);
    std::lognormal_distribution<double> pause(spec_.pause_log_mean(), spec_.pause_log_sd);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i > 0) hover(samples_.back(), pieces[i].front(), pause(rng_));
      draw(Path(pieces[i]));
    }
    return std::move(samples_);
  }

 private:
  // Template strokes split further at random points to model extra pen lifts.
  std::vector<Polyline> split_pieces(const std::vector<Polyline>& strokes) {
    std::vector<Polyline> pieces = strokes;
    std::poisson_distribution<int> extra(spec_.extra_pauses());
    const int lifts = spec_.extra_pauses() > 0.0 ? extra(rng_) : 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < lifts; ++k) {
      std::vector<double> lengths;
      double total = 0.0;
      for (const Polyline& p : pieces) {
        const double len = Path(p).length();
        lengths.push_back(len >= 6.0 ? len : 0.0);
        total += lengths.back();
      }
      if (total <= 0.0) break;
      double pick = unit(rng_) * total;
      std::size_t idx = 0;
      while (idx + 1 < lengths.size() && (lengths[idx] == 0.0 || pick >= lengths[idx])) {
        pick -= lengths[idx];
        ++idx;
      }
      const Path path(pieces[idx]);
      const double cut = path.length() * (0.3 + 0.4 * unit(rng_));
      Polyline head = path.slice(0.0, cut);
      Polyline tail = path.slice(cut, path.length());
      pieces[idx] = std::move(head);
      pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(idx) + 1, std::move(tail));
    }
    return pieces;
  }

  double next_time() {
    // 1/64 ms grid; the sampling interval is far above the grid spacing.
    return quantize(static_cast<double>(index_++) * 1000.0 * dt_, 64.0);
  }

  void step_tilt() {
    std::normal_distribution<double> step(0.0, spec_.tilt_drift_sd);
    tilt_x_ = std::clamp(tilt_x_ + step(rng_), -80.0, 80.0);
    tilt_y_ = std::clamp(tilt_y_ + step(rng_), -80.0, 80.0);
  }

  void emit(const Vector2d& p, double pressure, bool down) {
    step_tilt();
    PenSample s;
    s.t = next_time();
    s.x = quantize(p.x(), 256.0);
    s.y = quantize(p.y(), 256.0);
    s.pressure = down ? quantize(pressure, 1024.0) : 0.0;
    s.tilt_x = quantize(tilt_x_, 64.0);
    s.tilt_y = quantize(tilt_y_, 64.0);
    s.pen_down = down;
    samples_.push_back(s);
  }

  void hover(const PenSample& from, const Vector2d& to, double seconds) {
    const Vector2d start(from.x, from.y);
    const int n = std::max(0, static_cast<int>(std::lround(seconds / dt_)) - 1);
    for (int k = 1; k <= n; ++k) emit(start + (to - start) * (static_cast<double>(k) / (n + 1)), 0.0, false);
  }

  void draw(const Path& path) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double L = path.length();
    const double v0 = std::min(spec_.speed_mean() * std::exp(spec_.speed_cv * normal(rng_)),
                               L * spec_.sampling_hz / 4.0);
    const double pm = std::clamp(spec_.pressure_mean * (1.0 + spec_.pressure_cv * normal(rng_)), 0.1, 0.95);
    const double phase = 2.0 * std::numbers::pi * std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    const double jitter = spec_.speed_jitter();
    const double omega = 2.0 * std::numbers::pi * spec_.tremor_rate();

    double s = 0.0;
    double g = 0.0;
    for (;;) {
      const double u = L > 0.0 ? s / L : 1.0;
      const auto [p, nrm] = path.at(s);
      const double wobble = spec_.tremor_amplitude * std::sin(omega * s + phase);
      const double pressure =
          std::clamp(pm * (0.6 + 0.4 * std::sin(std::numbers::pi * u)) + 0.01 * normal(rng_), 0.01, 1.0);
      emit(p + wobble * nrm, pressure, true);
      if (s >= L) break;
      g = 0.9 * g + jitter * std::sqrt(1.0 - 0.81) * normal(rng_);
      const double v = v0 * (0.4 + 0.6 * std::sin(std::numbers::pi * u)) * std::max(0.2, 1.0 + g);
      s = std::min(L, s + std::max(v * dt_, L / 1000.0));
    }
  }

  const CohortSpec& spec_;
  std::mt19937_64 rng_;
  double dt_;
  double tilt_x_ = 0.0;
  double tilt_y_ = 0.0;
  long index_ = 0;
  std::vector<PenSample> samples_;
};

}  // namespace

const TaskLayouts& default_layouts() {
  static const TaskLayouts layouts = build_default_layouts();
  return layouts;
}

json layouts_to_json(const TaskLayouts& layouts) {
  json tasks = json::array();
  for (const TaskTemplate& t : layouts.tasks) {
    json strokes = json::array();
    for (const Polyline& p : t.strokes) {
      json pts = json::array();
      for (const Vector2d& v : p) pts.push_back(point_json(v));
      strokes.push_back(std::move(pts));
    }
    json entry = {{"task", task_name(t.task)}, {"instruction", t.instruction}, {"strokes", std::move(strokes)}};
    if (!t.targets.empty()) {
      json targets = json::array();
      for (std::size_t i = 0; i < t.targets.size(); ++i) {
        targets.push_back({{"label", t.target_labels[i]}, {"center", point_json(t.targets[i])}});
      }
      entry["targets"] = std::move(targets);
    }
    tasks.push_back(std::move(entry));
  }
  return {{"canvas_mm", {{"width", layouts.canvas_width}, {"height", layouts.canvas_height}}},
          {"tasks", std::move(tasks)}};
}

TaskLayouts layouts_from_json(const json& j) {
  try {
    TaskLayouts out;
    out.canvas_width = j.at("canvas_mm").at("width").get<double>();
    out.canvas_height = j.at("canvas_mm").at("height").get<double>();
    std::array<bool, 5> seen{};
    for (const json& entry : j.at("tasks")) {
      const auto kind = parse_task_name(entry.at("task").get<std::string>());
      if (!kind) throw Error(ErrorCode::BadSpec, "unknown task in layout");
      TaskTemplate& t = out.tasks[task_index(*kind)];
      t = {};
      t.task = *kind;
      t.instruction = entry.value("instruction", "");
      for (const json& stroke : entry.at("strokes")) {
        Polyline p;
        for (const json& pt : stroke) p.push_back(point_from_json(pt));
        if (p.size() < 2) throw Error(ErrorCode::BadSpec, "layout stroke needs two points");
        t.strokes.push_back(std::move(p));
      }
      if (const auto targets = entry.find("targets"); targets != entry.end()) {
        for (const json& target : *targets) {
          t.target_labels.push_back(target.at("label").get<std::string>());
          t.targets.push_back(point_from_json(target.at("center")));
        }
      }
      if (t.strokes.empty()) throw Error(ErrorCode::BadSpec, "layout task without strokes");
      seen[task_index(*kind)] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
      throw Error(ErrorCode::BadSpec, "layout must define all five tasks");
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadSpec, std::string("malformed layout: ") + e.what());
  }
}

double CohortSpec::speed_mean() const { return lerp(speed_mean_healthy, speed_mean_impaired, theta); }
double CohortSpec::speed_jitter() const {
  return lerp(speed_jitter_healthy, speed_jitter_impaired, theta);
}
double CohortSpec::tremor_rate() const { return lerp(tremor_rate_healthy, tremor_rate_impaired, theta); }
double CohortSpec::extra_pauses() const {
  return lerp(extra_pauses_healthy, extra_pauses_impaired, theta);
}
double CohortSpec::pause_log_mean() const {
  return lerp(pause_log_mean_healthy, pause_log_mean_impaired, theta);
}

void CohortSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::BadSpec, what);
  };
  const auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(std::isfinite(theta) && theta >= 0.0 && theta <= 1.0, "theta must lie in [0,1]");
  require(std::isfinite(sampling_hz) && sampling_hz >= 10.0 && sampling_hz <= 2000.0,
          "sampling rate must lie in [10, 2000] Hz");
  require(speed_mean_impaired > 0.0 && std::isfinite(speed_mean_healthy) &&
              speed_mean_healthy >= speed_mean_impaired,
          "speed must be positive and non-increasing in theta");
  require(finite_nonneg(speed_cv) && finite_nonneg(speed_jitter_healthy) &&
              speed_jitter_impaired >= speed_jitter_healthy && std::isfinite(speed_jitter_impaired),
          "speed variability must be non-negative and non-decreasing in theta");
  require(finite_nonneg(tremor_rate_healthy) && tremor_rate_impaired >= tremor_rate_healthy &&
              std::isfinite(tremor_rate_impaired) && finite_nonneg(tremor_amplitude),
          "tremor must be non-negative and non-decreasing in theta");
  require(finite_nonneg(extra_pauses_healthy) && extra_pauses_impaired >= extra_pauses_healthy &&
              std::isfinite(extra_pauses_impaired),
          "pause count must be non-negative and non-decreasing in theta");
  require(std::isfinite(pause_log_mean_healthy) && std::isfinite(pause_log_mean_impaired) &&
              pause_log_mean_impaired >= pause_log_mean_healthy && finite_nonneg(pause_log_sd),
          "pause duration must be non-decreasing in theta");
  require(pressure_mean > 0.0 && pressure_mean <= 1.0 && finite_nonneg(pressure_cv),
          "pressure mean must lie in (0,1]");
  require(finite_nonneg(tilt_drift_sd), "tilt drift must be non-negative");
}

CohortSpec cohort_spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadSpec, "cohort spec must be a JSON object");
  CohortSpec spec;
  const std::pair<const char*, double CohortSpec::*> fields[] = {
      {"theta", &CohortSpec::theta},
      {"sampling_hz", &CohortSpec::sampling_hz},
      {"speed_mean_healthy", &CohortSpec::speed_mean_healthy},
      {"speed_mean_impaired", &CohortSpec::speed_mean_impaired},
      {"speed_cv", &CohortSpec::speed_cv},
      {"speed_jitter_healthy", &CohortSpec::speed_jitter_healthy},
      {"speed_jitter_impaired", &CohortSpec::speed_jitter_impaired},
      {"tremor_rate_healthy", &CohortSpec::tremor_rate_healthy},
      {"tremor_rate_impaired", &CohortSpec::tremor_rate_impaired},
      {"tremor_amplitude", &CohortSpec::tremor_amplitude},
      {"extra_pauses_healthy", &CohortSpec::extra_pauses_healthy},
      {"extra_pauses_impaired", &CohortSpec::extra_pauses_impaired},
      {"pause_log_mean_healthy", &CohortSpec::pause_log_mean_healthy},
      {"pause_log_mean_impaired", &CohortSpec::pause_log_mean_impaired},
      {"pause_log_sd", &CohortSpec::pause_log_sd},
      {"pressure_mean", &CohortSpec::pressure_mean},
      {"pressure_cv", &CohortSpec::pressure_cv},
      {"tilt_drift_sd", &CohortSpec::tilt_drift_sd},
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "layouts") {
      spec.layouts = layouts_from_json(value);
      continue;
    }
    const auto it = std::find_if(std::begin(fields), std::end(fields),
                                 [&](const auto& f) { return key == f.first; });
    if (it == std::end(fields)) throw Error(ErrorCode::BadSpec, "unknown cohort spec field '" + key + "'");
    if (!value.is_number()) throw Error(ErrorCode::BadSpec, "cohort spec field '" + key + "' must be a number");
    spec.*(it->second) = value.get<double>();
  }
  spec.validate();
  return spec;
}

Diagnosis diagnosis_for(double theta) {
  if (theta < 0.33) return Diagnosis::CN;
  if (theta < 0.66) return Diagnosis::MCI;
  return Diagnosis::Dementia;
}

Labels draw_labels(double theta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Labels l;
  l.diagnosis = diagnosis_for(theta);
  const double mmse = std::round(29.0 - 10.0 * theta + normal(rng));
  l.mmse = static_cast<int>(std::clamp(mmse, 0.0, 30.0));
  l.mtl_atrophy_z = 0.8 + 1.4 * theta + 0.3 * normal(rng);
  return l;
}

DrawingSession generate_session(const CohortSpec& spec, std::uint64_t seed) {
  spec.validate();
  DrawingSession session;
  char id[32];
  std::snprintf(id, sizeof id, "synth-%016llx", static_cast<unsigned long long>(seed));
  session.session_id = id;
  for (TaskKind task : kAllTasks) {
    TaskSynthesizer synth(spec, mix_seed(seed, task_index(task)));
    session.recordings.emplace_back(task, synth.run(spec.layouts.at(task)));
  }
  const Labels labels = draw_labels(spec.theta, mix_seed(seed, 0x100));
  session.subject = SubjectRecord{labels.diagnosis, labels.mmse, labels.mtl_atrophy_z};
  return session;
}

StratifiedTheta reference_strata() {
  return {{46, 67, 32}, {{{0.0, 0.2}}, {{0.42, 0.58}}, {{0.8, 1.0}}}};
}

Cohort generate_cohort(int n, const ThetaDistribution& distribution, std::uint64_t seed,
                       const CohortSpec& base) {
  if (n < 1) throw Error(ErrorCode::BadSpec, "cohort size must be at least 1");
  std::mt19937_64 rng(mix_seed(seed, 0x5000));
  std::vector<double> thetas;
  auto check_band = [](double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw Error(ErrorCode::BadSpec, "theta band outside [0,1]");
  };
  if (const auto* f = std::get_if<FixedTheta>(&distribution)) {
    check_band(f->theta, f->theta);
    thetas.assign(static_cast<std::size_t>(n), f->theta);
  } else if (const auto* u = std::get_if<UniformTheta>(&distribution)) {
    check_band(u->low, u->high);
    std::uniform_real_distribution<double> d(u->low, u->high);
    for (int i = 0; i < n; ++i) thetas.push_back(d(rng));
  } else {
    const auto& s = std::get<StratifiedTheta>(distribution);
    if (s.counts.size() != s.bands.size()) throw Error(ErrorCode::BadSpec, "one band per stratum count");
    int total = 0;
    for (std::size_t k = 0; k < s.counts.size(); ++k) {
      check_band(s.bands[k][0], s.bands[k][1]);
      if (s.counts[k] < 0) throw Error(ErrorCode::BadSpec, "negative stratum count");
      total += s.counts[k];
      std::uniform_real_distribution<double> d(s.bands[k][0], s.bands[k][1]);
      for (int i = 0; i < s.counts[k]; ++i) thetas.push_back(d(rng));
    }
    if (total != n) throw Error(ErrorCode::BadSpec, "stratum counts must sum to n");
    std::shuffle(thetas.begin(), thetas.end(), rng);
  }

  Cohort cohort;
  cohort.members.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    CohortSpec spec = base;
    spec.theta = thetas[i];
    CohortMember m{thetas[i], generate_session(spec, mix_seed(seed, i))};
    char id[32];
    std::snprintf(id, sizeof id, "subj-%04zu", i + 1);
    m.session.session_id = id;
    cohort.members.push_back(std::move(m));
  }
  return cohort;
}

void write_labels_csv(std::ostream& out, const Cohort& cohort) {
  std::vector<dataset::LabelRow> rows;
  for (const CohortMember& m : cohort.members) {
    const SubjectRecord& s = *m.session.subject;
    rows.push_back({m.session.session_id, s.diagnosis, s.mmse, s.mtl_atrophy_z});
  }
  dataset::write_labels_csv(out, rows);
}

}  // namespace inkscreen::synth
