#include "inkscreen/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "inkscreen/error.hpp"
#include "inkscreen/eval/report.hpp"

namespace inkscreen::bundle {

using learn::Index;
using learn::Matrix;
using learn::Vector;
using nlohmann::json;

namespace {

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

json matrix_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
    throw Error(ErrorCode::MalformedInput, "matrix size does not match its data");
  }
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

const char* task_string(learn::Task t) { return t == learn::Task::Classification ? "classification" : "regression"; }

learn::Task task_from(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "classification") return learn::Task::Classification;
  if (s == "regression") return learn::Task::Regression;
  throw Error(ErrorCode::MalformedInput, "unknown task '" + s + "'");
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw Error(ErrorCode::MalformedInput, "bad hex value '" + s + "'");
  return v;
}

json target_json(const TargetModel& t) {
  const auto& p = t.pipeline;
  return {{"target", dataset::target_name(t.target)},
          {"task", task_string(t.task)},
          {"n_classes", t.n_classes},
          {"preprocessor",
           {{"median", vector_json(p.preprocessor.median)},
            {"mean", vector_json(p.preprocessor.mean)},
            {"scale", vector_json(p.preprocessor.scale)}}},
          {"selected_features", p.selected},
          {"hyperparams", eval::hyperparams_to_json(p.hyperparams)},
          {"inner_score", p.inner_score},
          {"model", model_to_json(p.model)},
          {"cv_report", t.cv_report}};
}

TargetModel target_from(const json& j, dataset::Target expected) {
  TargetModel t;
  const auto target = dataset::parse_target(j.at("target").get<std::string>());
  if (target != expected) throw Error(ErrorCode::MalformedInput, "bundle target out of place");
  t.target = expected;
  t.task = task_from(j.at("task"));
  t.n_classes = j.at("n_classes").get<int>();
  const json& pp = j.at("preprocessor");
  t.pipeline.preprocessor = {vector_from(pp.at("median")), vector_from(pp.at("mean")),
                             vector_from(pp.at("scale"))};
  t.pipeline.selected = j.at("selected_features").get<std::vector<Index>>();
  t.pipeline.hyperparams = eval::hyperparams_from_json(j.at("hyperparams"));
  t.pipeline.inner_score = j.at("inner_score").get<double>();
  t.pipeline.model = model_from_json(j.at("model"));
  t.cv_report = j.value("cv_report", json());
  const Index p = t.pipeline.preprocessor.n_features();
  if (t.pipeline.preprocessor.mean.size() != p || t.pipeline.preprocessor.scale.size() != p) {
    throw Error(ErrorCode::MalformedInput, "preprocessor vectors disagree in length");
  }
  for (Index c : t.pipeline.selected) {
    if (c < 0 || c >= p) throw Error(ErrorCode::MalformedInput, "selected feature index out of range");
  }
  return t;
}

TargetModel train_target(const dataset::FeatureTable& features, std::span<const dataset::LabelRow> labels,
                         dataset::Target target, const TrainOptions& options, std::uint64_t stream) {
  const dataset::LabeledData data = dataset::build_target(features, labels, target);
  TargetModel t;
  t.target = target;
  t.task = data.task;
  t.n_classes = data.n_classes;
  t.pipeline = eval::fit_pipeline(data.X, data.y, data.task, data.n_classes, options.config,
                                  learn::mix_seed(options.config.seed, stream));
  if (options.with_cv) {
    t.cv_report = eval::to_json(eval::nested_cv(data.X, data.y, data.task, data.n_classes, options.config));
  }
  return t;
}

}  // namespace

json model_to_json(const learn::Model& model) {
  if (const auto* en = std::get_if<learn::ElasticNetGLM>(&model)) {
    json predictors = json::array();
    for (const auto& p : en->predictors) {
      predictors.push_back({{"weights", vector_json(p.weights)}, {"intercept", p.intercept}});
    }
    return {{"family", "elastic_net"},
            {"flavor", en->flavor == learn::GlmFlavor::Logistic ? "logistic" : "linear"},
            {"l1_ratio", en->params.l1_ratio},
            {"C", en->params.C},
            {"n_classes", en->n_classes},
            {"predictors", std::move(predictors)}};
  }
  if (const auto* rf = std::get_if<learn::RandomForestModel>(&model)) {
    json trees = json::array();
    for (const auto& tree : rf->trees) {
      std::vector<int> feature, left, right;
      std::vector<double> threshold;
      json values = json::array();
      for (const auto& n : tree.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        values.push_back(vector_json(n.value));
      }
      trees.push_back({{"feature", feature},
                       {"threshold", threshold},
                       {"left", left},
                       {"right", right},
                       {"value", std::move(values)}});
    }
    return {{"family", "random_forest"},
            {"task", task_string(rf->task)},
            {"n_classes", rf->n_classes},
            {"n_features", rf->n_features},
            {"max_depth", rf->params.max_depth},
            {"max_features", rf->params.max_features},
            {"n_trees", rf->params.n_trees},
            {"seed", rf->params.seed},
            {"trees", std::move(trees)}};
  }
  const auto& svm = std::get<learn::SVMModel>(model);
  json machines = json::array();
  for (const auto& m : svm.machines) {
    machines.push_back(
        {{"support_vectors", matrix_json(m.support_vectors)}, {"coef", vector_json(m.coef)}, {"rho", m.rho}});
  }
  return {{"family", "svm"},
          {"task", task_string(svm.task)},
          {"kernel", learn::kernel_name(svm.params.kernel)},
          {"C", svm.params.C},
          {"gamma", svm.params.gamma},
          {"epsilon", svm.params.epsilon},
          {"n_classes", svm.n_classes},
          {"n_features", svm.n_features},
          {"machines", std::move(machines)}};
}

learn::Model model_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "elastic_net") {
    learn::ElasticNetGLM m;
    const auto flavor = j.at("flavor").get<std::string>();
    if (flavor != "logistic" && flavor != "linear") throw Error(ErrorCode::MalformedInput, "unknown GLM flavor");
    m.flavor = flavor == "logistic" ? learn::GlmFlavor::Logistic : learn::GlmFlavor::Linear;
    m.params = {j.at("l1_ratio").get<double>(), j.at("C").get<double>()};
    m.n_classes = j.at("n_classes").get<int>();
    for (const json& p : j.at("predictors")) {
      learn::LinearPredictor lp;
      lp.weights = vector_from(p.at("weights"));
      lp.intercept = p.at("intercept").get<double>();
      m.predictors.push_back(std::move(lp));
    }
    return m;
  }
  if (family == "random_forest") {
    learn::RandomForestModel m;
    m.task = task_from(j.at("task"));
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<Index>();
    m.params.max_depth = j.at("max_depth").get<int>();
    m.params.max_features = j.at("max_features").get<int>();
    m.params.n_trees = j.at("n_trees").get<int>();
    m.params.seed = j.at("seed").get<std::uint64_t>();
    for (const json& t : j.at("trees")) {
      const auto feature = t.at("feature").get<std::vector<int>>();
      const auto threshold = t.at("threshold").get<std::vector<double>>();
      const auto left = t.at("left").get<std::vector<int>>();
      const auto right = t.at("right").get<std::vector<int>>();
      const json& values = t.at("value");
      const std::size_t n = feature.size();
      if (threshold.size() != n || left.size() != n || right.size() != n || values.size() != n || n == 0) {
        throw Error(ErrorCode::MalformedInput, "tree arrays disagree in length");
      }
      learn::DecisionTree tree;
      for (std::size_t i = 0; i < n; ++i) {
        const int limit = static_cast<int>(n);
        if (feature[i] >= 0 && (left[i] <= 0 || left[i] >= limit || right[i] <= 0 || right[i] >= limit ||
                                feature[i] >= m.n_features)) {
          throw Error(ErrorCode::MalformedInput, "tree node references out of range");
        }
        tree.nodes.push_back({feature[i], threshold[i], left[i], right[i], vector_from(values[i])});
      }
      m.trees.push_back(std::move(tree));
    }
    return m;
  }
  if (family == "svm") {
    learn::SVMModel m;
    m.task = task_from(j.at("task"));
    eval::Hyperparams hp = eval::hyperparams_from_json(j);
    m.params = hp.svm;
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<Index>();
    for (const json& mj : j.at("machines")) {
      learn::SvmMachine machine;
      machine.support_vectors = matrix_from(mj.at("support_vectors"));
      machine.coef = vector_from(mj.at("coef"));
      machine.rho = mj.at("rho").get<double>();
      m.machines.push_back(std::move(machine));
    }
    return m;
  }
  throw Error(ErrorCode::MalformedInput, "unknown model family '" + family + "'");
}

TrainedBundle train_bundle(const dataset::FeatureTable& features, std::span<const dataset::LabelRow> labels,
                           const TrainOptions& options) {
  TrainedBundle b;
  b.registry_hash = features::registry_hash({options.smoothing_window});
  b.smoothing_window = options.smoothing_window;
  b.seed = options.config.seed;
  b.timestamp = options.timestamp;
  b.dataset_fingerprint = dataset::fingerprint(features);
  b.diagnosis = train_target(features, labels, dataset::Target::Diagnosis, options, 0x4001);
  b.mmse = train_target(features, labels, dataset::Target::Mmse, options, 0x4002);
  b.mtl = train_target(features, labels, dataset::Target::Mtl, options, 0x4003);
  return b;
}

json bundle_to_json(const TrainedBundle& b) {
  return {{"format_version", b.format_version},
          {"registry_hash", hex64(b.registry_hash)},
          {"smoothing_window", b.smoothing_window},
          {"targets", {target_json(b.diagnosis), target_json(b.mmse), target_json(b.mtl)}},
          {"metadata",
           {{"seed", b.seed}, {"timestamp", b.timestamp}, {"dataset_fingerprint", hex64(b.dataset_fingerprint)}}}};
}

TrainedBundle bundle_from_json(const json& j) {
  try {
    TrainedBundle b;
    b.format_version = j.at("format_version").get<int>();
    if (b.format_version != kBundleFormatVersion) {
      throw Error(ErrorCode::BundleVersionMismatch,
                  "bundle format " + std::to_string(b.format_version) + ", expected " +
                      std::to_string(kBundleFormatVersion));
    }
    b.smoothing_window = j.at("smoothing_window").get<int>();
    b.registry_hash = parse_hex64(j.at("registry_hash").get<std::string>());
    if (b.smoothing_window < 1 || b.smoothing_window % 2 == 0 ||
        b.registry_hash != features::registry_hash({b.smoothing_window})) {
      throw Error(ErrorCode::RegistryHashMismatch, "bundle was trained on a different feature registry");
    }
    const json& targets = j.at("targets");
    if (!targets.is_array() || targets.size() != 3) throw Error(ErrorCode::MalformedInput, "bundle needs 3 targets");
    b.diagnosis = target_from(targets[0], dataset::Target::Diagnosis);
    b.mmse = target_from(targets[1], dataset::Target::Mmse);
    b.mtl = target_from(targets[2], dataset::Target::Mtl);
    for (const TargetModel* t : {&b.diagnosis, &b.mmse, &b.mtl}) {
      if (t->pipeline.preprocessor.n_features() != static_cast<Index>(features::kSessionFeatures)) {
        throw Error(ErrorCode::RegistryHashMismatch, "bundle preprocessor width differs from the registry");
      }
    }
    const json& meta = j.at("metadata");
    b.seed = meta.at("seed").get<std::uint64_t>();
    b.timestamp = meta.at("timestamp").get<std::string>();
    b.dataset_fingerprint = parse_hex64(meta.at("dataset_fingerprint").get<std::string>());
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("malformed bundle: ") + e.what());
  }
}

void save_bundle(const TrainedBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << bundle_to_json(bundle).dump(1) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

TrainedBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
  }
  return bundle_from_json(j);
}

std::vector<Prediction> predict(const TrainedBundle& bundle, const dataset::FeatureTable& features) {
  const Matrix probs = learn::model_probabilities(bundle.diagnosis.pipeline.model,
                                                  learn::select_cols(learn::apply_preprocessor(
                                                                         bundle.diagnosis.pipeline.preprocessor,
                                                                         features.values),
                                                                     bundle.diagnosis.pipeline.selected));
  const Matrix mmse = eval::pipeline_scores(bundle.mmse.pipeline, features.values);
  const Matrix mtl = eval::pipeline_scores(bundle.mtl.pipeline, features.values);
  std::vector<Prediction> out;
  for (std::size_t i = 0; i < features.ids.size(); ++i) {
    const auto r = static_cast<Index>(i);
    Prediction p;
    p.session_id = features.ids[i];
    for (Index c = 0; c < 3; ++c) p.probabilities[static_cast<std::size_t>(c)] = c < probs.cols() ? probs(r, c) : 0.0;
    p.mmse = std::clamp(mmse(r, 0), 0.0, 30.0);
    p.mtl_z = mtl(r, 0);
    out.push_back(std::move(p));
  }
  return out;
}

Prediction predict(const TrainedBundle& bundle, const features::SessionFeatureVector& features) {
  dataset::FeatureTable table;
  table.ids = {features.session_id};
  table.values = features.values.transpose();
  return predict(bundle, table).front();
}

json to_json(const Prediction& p) {
  return {{"session_id", p.session_id},
          {"probabilities",
           {{"CN", p.probabilities[0]}, {"MCI", p.probabilities[1]}, {"DEMENTIA", p.probabilities[2]}}},
          {"mmse", p.mmse},
          {"mtl_z", p.mtl_z}};
}

}  // namespace inkscreen::bundle
