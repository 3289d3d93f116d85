#include "inkscreen/eval/report.hpp"

#include "inkscreen/error.hpp"

namespace inkscreen::eval {

using nlohmann::json;

json hyperparams_to_json(const Hyperparams& hp) {
  json j;
  j["family"] = learn::family_name(hp.family);
  switch (hp.family) {
    case Family::ElasticNet:
      j["l1_ratio"] = hp.elastic_net.l1_ratio;
      j["C"] = hp.elastic_net.C;
      break;
    case Family::RandomForest:
      j["max_depth"] = hp.max_depth;
      j["max_features"] = hp.max_features;
      break;
    case Family::Svm:
      j["kernel"] = learn::kernel_name(hp.svm.kernel);
      j["C"] = hp.svm.C;
      j["gamma"] = hp.svm.gamma;
      j["epsilon"] = hp.svm.epsilon;
      break;
  }
  return j;
}

Hyperparams hyperparams_from_json(const json& j) {
  Hyperparams hp;
  const auto family = learn::parse_family(j.at("family").get<std::string>());
  if (!family) throw Error(ErrorCode::MalformedInput, "unknown model family");
  hp.family = *family;
  switch (hp.family) {
    case Family::ElasticNet:
      hp.elastic_net = {j.at("l1_ratio").get<double>(), j.at("C").get<double>()};
      break;
    case Family::RandomForest:
      hp.max_depth = j.at("max_depth").get<int>();
      hp.max_features = j.at("max_features").get<int>();
      break;
    case Family::Svm: {
      const auto kernel = j.at("kernel").get<std::string>();
      if (kernel == "linear") hp.svm.kernel = learn::Kernel::Linear;
      else if (kernel == "rbf") hp.svm.kernel = learn::Kernel::Rbf;
      else throw Error(ErrorCode::BadKernel, "unknown kernel '" + kernel + "'");
      hp.svm.C = j.at("C").get<double>();
      hp.svm.gamma = j.at("gamma").get<double>();
      hp.svm.epsilon = j.value("epsilon", 0.1);
      break;
    }
  }
  return hp;
}

json to_json(const CVResult& result) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["task"] = result.task == Task::Classification ? "classification" : "regression";
  if (result.task == Task::Classification) {
    j["n_classes"] = result.n_classes;
    if (result.n_classes == 2) j["positive_class"] = result.positive_class;
  }
  j["seed"] = result.seed;
  json metrics = json::object();
  for (const MetricSummary& m : result.metrics) {
    metrics[m.name] = {{"mean", m.interval.mean},
                       {"ci95", {m.interval.low, m.interval.high}},
                       {"per_repeat", m.per_repeat}};
  }
  j["metrics"] = std::move(metrics);
  j["headline"] = {{"metric", result.headline_name()}, {"mean", result.headline()}};
  if (result.confusion.size() > 0) {
    json cm = json::array();
    for (Index r = 0; r < result.confusion.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < result.confusion.cols(); ++c) row.push_back(result.confusion(r, c));
      cm.push_back(std::move(row));
    }
    j["confusion_matrix"] = std::move(cm);
  }
  json choices = json::array();
  for (const FoldChoice& c : result.choices) {
    choices.push_back({{"repeat", c.repeat},
                       {"fold", c.fold},
                       {"hyperparams", hyperparams_to_json(c.hyperparams)},
                       {"inner_score", c.inner_score},
                       {"selected_features", c.selected_features}});
  }
  j["fold_choices"] = std::move(choices);
  return j;
}

json to_json(const PermutationResult& result) {
  return {{"schema_version", kReportSchemaVersion},
          {"metric", result.metric},
          {"observed", result.observed},
          {"null_distribution", result.null_distribution},
          {"n_permutations", result.null_distribution.size()},
          {"p_value", result.p_value},
          {"significant", result.p_value < 0.05},
          {"seed", result.seed}};
}

}  // namespace inkscreen::eval
