#include "inkscreen/features.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "inkscreen/error.hpp"
#include "inkscreen/stats.hpp"

namespace inkscreen::features {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<FeatureInfo, kFeaturesPerTask> kRegistry = {{
    {"speed_median", Family::Kinematic},
    {"speed_cv_across", Family::Kinematic},
    {"speed_cv_within", Family::Kinematic},
    {"speed_extrema_per_length", Family::Kinematic},
    {"speed_extrema_per_time", Family::Kinematic},
    {"accel_median", Family::Kinematic},
    {"accel_cv_across", Family::Kinematic},
    {"accel_cv_within", Family::Kinematic},
    {"accel_extrema_per_length", Family::Kinematic},
    {"accel_extrema_per_time", Family::Kinematic},
    {"jerk_median", Family::Kinematic},
    {"jerk_cv_across", Family::Kinematic},
    {"jerk_cv_within", Family::Kinematic},
    {"jerk_extrema_per_length", Family::Kinematic},
    {"jerk_extrema_per_time", Family::Kinematic},
    {"pressure_median", Family::Pressure},
    {"pressure_cv_across", Family::Pressure},
    {"pressure_cv_within", Family::Pressure},
    {"pressure_extrema_per_length", Family::Pressure},
    {"pressure_extrema_per_time", Family::Pressure},
    {"pressure_rate_median", Family::Pressure},
    {"pressure_rate_cv_across", Family::Pressure},
    {"pressure_rate_cv_within", Family::Pressure},
    {"tilt_x_sd_across", Family::Posture},
    {"tilt_x_sd_within", Family::Posture},
    {"tilt_x_rate_abs_median", Family::Posture},
    {"tilt_x_rate_cv_across", Family::Posture},
    {"tilt_x_rate_cv_within", Family::Posture},
    {"tilt_y_sd_across", Family::Posture},
    {"tilt_y_sd_within", Family::Posture},
    {"tilt_y_rate_abs_median", Family::Posture},
    {"tilt_y_rate_cv_across", Family::Posture},
    {"tilt_y_rate_cv_within", Family::Posture},
    {"pause_mean", Family::Pause},
    {"pause_cv", Family::Pause},
    {"n_drawings", Family::Pause},
    {"pause_drawing_ratio", Family::Pause},
    {"adjusted_total_duration", Family::Pause},
}};

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

// median, cv_across, cv_within, extrema_per_length, extrema_per_time
std::array<FeatureValue, 5> series_block(std::span<const Eigen::VectorXd> per_stroke,
                                         double total_path, double total_duration) {
  std::array<FeatureValue, 5> out{};
  if (per_stroke.empty()) return out;
  out[0] = pooled_median(per_stroke);
  out[1] = cv_across_strokes(per_stroke);
  out[2] = cv_within_strokes(per_stroke);
  double extrema = 0.0;
  for (const auto& s : per_stroke) extrema += static_cast<double>(count_local_extrema(s));
  out[3] = ratio(extrema, total_path);
  out[4] = ratio(extrema, total_duration);
  return out;
}

template <typename Member>
std::vector<Eigen::VectorXd> collect(std::span<const KinematicSeries> eligible, Member member) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(eligible.size());
  for (const auto& k : eligible) out.push_back(k.*member);
  return out;
}

std::vector<Eigen::VectorXd> absolute(std::vector<Eigen::VectorXd> series) {
  for (auto& s : series) s = s.cwiseAbs();
  return series;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const std::array<FeatureInfo, kFeaturesPerTask>& registry() { return kRegistry; }

std::optional<std::size_t> feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kRegistry.size(); ++i) {
    if (kRegistry[i].name == name) return i;
  }
  return std::nullopt;
}

int spatial_scaling_exponent(std::size_t feature) {
  const std::string_view name = kRegistry.at(feature).name;
  if (name == "speed_median" || name == "accel_median" || name == "jerk_median") return 1;
  if (name.ends_with("_extrema_per_length") || name == "adjusted_total_duration") return -1;
  return 0;
}

std::vector<std::string> session_column_names() {
  std::vector<std::string> names;
  names.reserve(kSessionFeatures);
  for (TaskKind task : kAllTasks) {
    for (const FeatureInfo& f : kRegistry) {
      names.push_back(std::string(task_name(task)) + "." + std::string(f.name));
    }
  }
  return names;
}

std::uint64_t registry_hash(const ExtractionOptions& options) {
  std::uint64_t h = fnv1a("inkscreen-registry-v1\n");
  for (const auto& name : session_column_names()) h = fnv1a(name + "\n", h);
  return fnv1a("smoothing_window=" + std::to_string(options.smoothing_window), h);
}

Eigen::VectorXd smooth(const Eigen::Ref<const Eigen::VectorXd>& series, int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::EvenWindow, "smoothing window must be odd and >= 1");
  }
  const Eigen::Index n = series.size();
  const Eigen::Index half = window / 2;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half);
    double sum = 0.0;
    for (Eigen::Index k = lo; k <= hi; ++k) sum += series(k);
    out(i) = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

Eigen::MatrixXd differentiate(const Eigen::Ref<const Eigen::MatrixXd>& values,
                              const Eigen::Ref<const Eigen::VectorXd>& t) {
  const Eigen::Index n = values.rows();
  if (n < 3 || t.size() != n) {
    throw Error(ErrorCode::TooShort, "differentiation needs at least three samples");
  }
  Eigen::MatrixXd d(n, values.cols());
  d.row(0) = (values.row(1) - values.row(0)) / (t(1) - t(0));
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    d.row(i) = (values.row(i + 1) - values.row(i - 1)) / (t(i + 1) - t(i - 1));
  }
  d.row(n - 1) = (values.row(n - 1) - values.row(n - 2)) / (t(n - 1) - t(n - 2));
  return d;
}

KinematicSeries kinematic_series(const Stroke& stroke, const ExtractionOptions& options) {
  if (!stroke.derivative_eligible()) {
    throw Error(ErrorCode::TooShort, "stroke has fewer than three samples");
  }
  const auto n = static_cast<Eigen::Index>(stroke.samples.size());
  const PenSample& first = stroke.samples.front();
  Eigen::VectorXd t(n), x(n), y(n), p(n), tx(n), ty(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PenSample& s = stroke.samples[static_cast<std::size_t>(i)];
    t(i) = (s.t - first.t) / 1000.0;
    x(i) = s.x - first.x;
    y(i) = s.y - first.y;
    p(i) = s.pressure;
    tx(i) = s.tilt_x;
    ty(i) = s.tilt_y;
  }
  const int w = options.smoothing_window;
  Eigen::MatrixXd pos(n, 2);
  pos.col(0) = smooth(x, w);
  pos.col(1) = smooth(y, w);

  KinematicSeries k;
  const Eigen::MatrixXd vel = differentiate(pos, t);
  const Eigen::MatrixXd acc = differentiate(vel, t);
  const Eigen::MatrixXd jerk = differentiate(acc, t);
  k.speed = vel.rowwise().norm();
  k.acceleration = acc.rowwise().norm();
  k.jerk = jerk.rowwise().norm();
  k.pressure = smooth(p, w);
  k.pressure_rate = differentiate(k.pressure, t).col(0);
  k.tilt_x = smooth(tx, w);
  k.tilt_y = smooth(ty, w);
  k.tilt_x_rate = differentiate(k.tilt_x, t).col(0);
  k.tilt_y_rate = differentiate(k.tilt_y, t).col(0);
  return k;
}

std::optional<double> pooled_median(std::span<const Eigen::VectorXd> per_stroke) {
  std::vector<double> all;
  for (const auto& s : per_stroke) all.insert(all.end(), s.data(), s.data() + s.size());
  return stats::median(std::move(all));
}

std::optional<double> cv(const Eigen::Ref<const Eigen::VectorXd>& values) { return stats::cv(values); }

std::optional<double> cv_across_strokes(std::span<const Eigen::VectorXd> per_stroke) {
  if (per_stroke.size() < 2) return std::nullopt;
  Eigen::VectorXd means(static_cast<Eigen::Index>(per_stroke.size()));
  for (std::size_t i = 0; i < per_stroke.size(); ++i) {
    means(static_cast<Eigen::Index>(i)) = per_stroke[i].mean();
  }
  return stats::cv(means);
}

std::optional<double> cv_within_strokes(std::span<const Eigen::VectorXd> per_stroke) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& s : per_stroke) {
    if (const auto c = stats::cv(s)) {
      sum += *c;
      ++used;
    }
  }
  if (used == 0) return std::nullopt;
  return sum / static_cast<double>(used);
}

std::size_t count_local_extrema(const Eigen::Ref<const Eigen::VectorXd>& series) {
  return stats::count_local_extrema(series);
}

std::array<FeatureValue, 10> posture_features(std::span<const KinematicSeries> eligible) {
  std::array<FeatureValue, 10> out{};
  if (eligible.empty()) return out;
  const auto axis = [&](auto tilt, auto rate, std::size_t offset) {
    const auto series = collect(eligible, tilt);
    if (series.size() >= 2) {
      Eigen::VectorXd means(static_cast<Eigen::Index>(series.size()));
      for (std::size_t i = 0; i < series.size(); ++i) {
        means(static_cast<Eigen::Index>(i)) = series[i].mean();
      }
      out[offset] = stats::sample_sd(means);
    }
    double sd_sum = 0.0;
    for (const auto& s : series) sd_sum += stats::sample_sd(s);
    out[offset + 1] = sd_sum / static_cast<double>(series.size());
    const auto abs_rate = absolute(collect(eligible, rate));
    out[offset + 2] = pooled_median(abs_rate);
    out[offset + 3] = cv_across_strokes(abs_rate);
    out[offset + 4] = cv_within_strokes(abs_rate);
  };
  axis(&KinematicSeries::tilt_x, &KinematicSeries::tilt_x_rate, 0);
  axis(&KinematicSeries::tilt_y, &KinematicSeries::tilt_y_rate, 5);
  return out;
}

std::array<FeatureValue, 5> pause_features(std::span<const Stroke> strokes,
                                           std::span<const Pause> pauses,
                                           double path_length_total) {
  std::array<FeatureValue, 5> out{};
  if (strokes.empty()) return out;
  Eigen::VectorXd durations(static_cast<Eigen::Index>(pauses.size()));
  for (std::size_t i = 0; i < pauses.size(); ++i) {
    durations(static_cast<Eigen::Index>(i)) = pauses[i].duration;
  }
  const double pause_total = durations.sum();
  double drawing_total = 0.0;
  for (const Stroke& s : strokes) drawing_total += s.duration;

  out[0] = pauses.empty() ? 0.0 : durations.mean();
  out[1] = pauses.size() < 2 ? FeatureValue(0.0) : stats::cv(durations);
  out[2] = static_cast<double>(strokes.size());
  out[3] = pauses.empty() ? FeatureValue(0.0) : ratio(pause_total, drawing_total);
  out[4] = ratio(pause_total + drawing_total, path_length_total);
  return out;
}

FeatureValue TaskFeatures::get(std::string_view name) const {
  const auto idx = feature_index(name);
  if (!idx || missing[*idx]) return std::nullopt;
  return values(static_cast<Eigen::Index>(*idx));
}

TaskFeatures extract_task_features(const TaskRecording& recording,
                                   const ExtractionOptions& options) {
  TaskFeatures f;
  f.task = recording.task();
  f.values.setConstant(kNaN);
  f.missing.fill(true);

  const auto& strokes = recording.strokes();
  if (strokes.empty()) return f;

  std::vector<KinematicSeries> eligible;
  double total_path = 0.0;
  double total_duration = 0.0;
  for (const Stroke& s : strokes) {
    total_path += s.path_length;
    total_duration += s.duration;
    if (s.derivative_eligible()) eligible.push_back(kinematic_series(s, options));
  }

  std::size_t slot = 0;
  const auto put = [&](const auto& block) {
    for (const FeatureValue& v : block) {
      if (v && std::isfinite(*v)) {
        f.values(static_cast<Eigen::Index>(slot)) = *v;
        f.missing[slot] = false;
      }
      ++slot;
    }
  };

  put(series_block(collect(eligible, &KinematicSeries::speed), total_path, total_duration));
  put(series_block(collect(eligible, &KinematicSeries::acceleration), total_path, total_duration));
  put(series_block(collect(eligible, &KinematicSeries::jerk), total_path, total_duration));
  put(series_block(collect(eligible, &KinematicSeries::pressure), total_path, total_duration));
  const auto rates = collect(eligible, &KinematicSeries::pressure_rate);
  const std::array<FeatureValue, 3> rate_block = {
      eligible.empty() ? FeatureValue() : pooled_median(rates), cv_across_strokes(rates),
      cv_within_strokes(rates)};
  put(rate_block);
  put(posture_features(eligible));
  put(pause_features(strokes, recording.pauses(), total_path));
  return f;
}

std::size_t SessionFeatureVector::missing_count() const {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), true));
}

SessionFeatureVector extract_session_features(const DrawingSession& session,
                                              const ExtractionOptions& options) {
  SessionFeatureVector v;
  v.session_id = session.session_id;
  v.values = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(kSessionFeatures), kNaN);
  v.missing.assign(kSessionFeatures, true);
  for (TaskKind task : kAllTasks) {
    const TaskRecording* rec = session.find(task);
    if (!rec) continue;
    const TaskFeatures tf = extract_task_features(*rec, options);
    const std::size_t base = task_index(task) * kFeaturesPerTask;
    v.values.segment(static_cast<Eigen::Index>(base), kFeaturesPerTask) = tf.values;
    for (std::size_t i = 0; i < kFeaturesPerTask; ++i) v.missing[base + i] = tf.missing[i];
  }
  return v;
}

}  // namespace inkscreen::features
