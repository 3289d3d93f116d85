#include "inkscreen/config.hpp"

#include <fstream>
#include <set>

#include "inkscreen/error.hpp"

namespace inkscreen {

using nlohmann::json;

namespace {

template <typename T>
std::vector<T> list(const json& j, const char* key) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::BadSpec, std::string(key) + " must be a non-empty array");
  try {
    return j.get<std::vector<T>>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::BadSpec, std::string(key) + " has elements of the wrong type");
  }
}

int positive_int(const json& j, const char* key, int minimum) {
  if (!j.is_number_integer() || j.get<long long>() < minimum) {
    throw Error(ErrorCode::BadSpec, std::string(key) + " must be an integer >= " + std::to_string(minimum));
  }
  return j.get<int>();
}

void apply_grid(const json& g, eval::HyperGrid& grid) {
  if (!g.is_object()) throw Error(ErrorCode::BadSpec, "grid must be an object");
  if (const auto preset = g.find("preset"); preset != g.end()) {
    const auto name = preset->is_string() ? preset->get<std::string>() : "";
    if (name == "reduced") grid = eval::HyperGrid::reduced();
    else if (name == "full") grid = eval::HyperGrid{};
    else throw Error(ErrorCode::BadSpec, "grid preset must be 'full' or 'reduced'");
  }
  for (const auto& [key, value] : g.items()) {
    if (key == "preset") continue;
    if (key == "en_l1_ratio") grid.en_l1_ratio = list<double>(value, "en_l1_ratio");
    else if (key == "en_C") grid.en_C = list<double>(value, "en_C");
    else if (key == "rf_max_depth") grid.rf_max_depth = list<int>(value, "rf_max_depth");
    else if (key == "rf_max_features") grid.rf_max_features = list<int>(value, "rf_max_features");
    else if (key == "svm_C") grid.svm_C = list<double>(value, "svm_C");
    else if (key == "svm_gamma") grid.svm_gamma = list<double>(value, "svm_gamma");
    else if (key == "svm_kernel") {
      grid.svm_kernel.clear();
      for (const auto& k : list<std::string>(value, "svm_kernel")) {
        if (k == "linear") grid.svm_kernel.push_back(learn::Kernel::Linear);
        else if (k == "rbf") grid.svm_kernel.push_back(learn::Kernel::Rbf);
        else throw Error(ErrorCode::BadKernel, "unknown kernel '" + k + "'");
      }
    } else {
      throw Error(ErrorCode::BadSpec, "unknown grid key '" + key + "'");
    }
  }
}

}  // namespace

RunConfig parse_run_config(const json& j, RunConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::BadSpec, "config must be a JSON object");
  RunConfig c = std::move(base);
  for (const auto& [key, value] : j.items()) {
    if (key == "repeats") c.cv.repeats = positive_int(value, "repeats", 1);
    else if (key == "outer_k") c.cv.outer_k = positive_int(value, "outer_k", 2);
    else if (key == "inner_k") c.cv.inner_k = positive_int(value, "inner_k", 2);
    else if (key == "n_trees") c.cv.n_trees = positive_int(value, "n_trees", 1);
    else if (key == "threads") c.cv.threads = positive_int(value, "threads", 0);
    else if (key == "seed") {
      const bool ok = value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
      if (!ok) throw Error(ErrorCode::BadSpec, "seed must be a non-negative integer");
      c.cv.seed = value.get<std::uint64_t>();
    } else if (key == "smoothing_window") {
      c.smoothing_window = positive_int(value, "smoothing_window", 1);
      if (c.smoothing_window % 2 == 0) throw Error(ErrorCode::EvenWindow, "smoothing_window must be odd");
    } else if (key == "selection_C") {
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw Error(ErrorCode::BadC, "selection_C must be positive");
      }
      c.cv.selection_C = value.get<double>();
    } else if (key == "regression_selector") {
      const auto s = value.is_string() ? value.get<std::string>() : "";
      if (s == "lasso") c.cv.regression_selector = learn::SelectorFlavor::Lasso;
      else if (s == "logistic") c.cv.regression_selector = learn::SelectorFlavor::Logistic;
      else throw Error(ErrorCode::BadSpec, "regression_selector must be 'lasso' or 'logistic'");
    } else if (key == "families") {
      c.cv.families.clear();
      std::set<learn::Family> seen;
      for (const auto& name : list<std::string>(value, "families")) {
        const auto f = learn::parse_family(name);
        if (!f) throw Error(ErrorCode::BadSpec, "unknown family '" + name + "'");
        if (seen.insert(*f).second) c.cv.families.push_back(*f);
      }
    } else if (key == "grid") {
      apply_grid(value, c.cv.grid);
    } else {
      throw Error(ErrorCode::BadSpec, "unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path.string());
  try {
    return parse_run_config(json::parse(in), std::move(base));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadSpec, path.string() + ": " + e.what());
  }
}

}  // namespace inkscreen
