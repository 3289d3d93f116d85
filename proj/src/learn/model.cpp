#include "inkscreen/learn/model.hpp"

#include <cmath>
#include <sstream>

#include "inkscreen/error.hpp"

namespace inkscreen::learn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::ElasticNet: return "elastic_net";
    case Family::RandomForest: return "random_forest";
    case Family::Svm: return "svm";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::ElasticNet, Family::RandomForest, Family::Svm}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string Hyperparams::describe() const {
  std::ostringstream os;
  os << family_name(family) << "(";
  switch (family) {
    case Family::ElasticNet:
      os << "l1_ratio=" << elastic_net.l1_ratio << ", C=" << elastic_net.C;
      break;
    case Family::RandomForest:
      os << "max_depth=" << max_depth << ", max_features=" << max_features;
      break;
    case Family::Svm:
      os << "kernel=" << kernel_name(svm.kernel) << ", C=" << svm.C;
      if (svm.kernel == Kernel::Rbf) os << ", gamma=" << svm.gamma;
      break;
  }
  os << ")";
  return os.str();
}

bool operator==(const Hyperparams& a, const Hyperparams& b) {
  if (a.family != b.family) return false;
  switch (a.family) {
    case Family::ElasticNet:
      return a.elastic_net.l1_ratio == b.elastic_net.l1_ratio && a.elastic_net.C == b.elastic_net.C;
    case Family::RandomForest:
      return a.max_depth == b.max_depth && a.max_features == b.max_features;
    case Family::Svm:
      return a.svm.kernel == b.svm.kernel && a.svm.C == b.svm.C &&
             (a.svm.kernel == Kernel::Linear || a.svm.gamma == b.svm.gamma);
  }
  return false;
}

Model fit_model(Task task, const Hyperparams& hp, const Eigen::Ref<const Matrix>& X,
                const Eigen::Ref<const Vector>& y, int n_classes, const FitSettings& settings) {
  const Vector weights = task == Task::Classification
                             ? balanced_class_weights(y, n_classes).sample_weights(y)
                             : Vector::Ones(y.size());
  switch (hp.family) {
    case Family::ElasticNet: {
      const GlmFlavor flavor = task == Task::Classification ? GlmFlavor::Logistic : GlmFlavor::Linear;
      return fit_elastic_net(flavor, X, y, n_classes, hp.elastic_net, weights);
    }
    case Family::RandomForest: {
      ForestParams fp{hp.max_depth, hp.max_features, settings.n_trees, settings.seed};
      return fit_random_forest(task, X, y, n_classes, fp, weights);
    }
    case Family::Svm:
      return fit_svm(task, X, y, n_classes, hp.svm, weights);
  }
  throw Error(ErrorCode::BadSpec, "unknown model family");
}

Matrix model_scores(const Model& model, const Eigen::Ref<const Matrix>& X) {
  return std::visit(overloaded{
                        [&](const ElasticNetGLM& m) { return glm_predict(m, X); },
                        [&](const RandomForestModel& m) { return rf_predict(m, X); },
                        [&](const SVMModel& m) { return svm_scores(m, X); },
                    },
                    model);
}

Matrix model_probabilities(const Model& model, const Eigen::Ref<const Matrix>& X) {
  const Matrix scores = model_scores(model, X);
  const auto* svm = std::get_if<SVMModel>(&model);
  if (!svm) return scores;
  if (svm->task == Task::Regression) throw Error(ErrorCode::ShapeMismatch, "regression model has no probabilities");
  Matrix probs(scores.rows(), scores.cols());
  for (Index i = 0; i < scores.rows(); ++i) {
    const double top = scores.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (scores.row(i).array() - top).exp();
    probs.row(i) = e / e.sum();
  }
  return probs;
}

Family model_family(const Model& model) {
  return std::visit(overloaded{
                        [](const ElasticNetGLM&) { return Family::ElasticNet; },
                        [](const RandomForestModel&) { return Family::RandomForest; },
                        [](const SVMModel&) { return Family::Svm; },
                    },
                    model);
}

}  // namespace inkscreen::learn
