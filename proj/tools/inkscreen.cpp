// inkscreen: extract | evaluate | permtest | train | predict | synth | serve
#include <algorithm>
#include <chrono>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "inkscreen/bundle.hpp"
#include "inkscreen/config.hpp"
#include "inkscreen/dataset.hpp"
#include "inkscreen/error.hpp"
#include "inkscreen/eval/report.hpp"
#include "inkscreen/features.hpp"
#include "inkscreen/service.hpp"
#include "inkscreen/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace inkscreen;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

std::vector<fs::path> session_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Common {
  std::uint64_t seed = 0;
  std::string config;

  RunConfig run_config() const {
    RunConfig base;
    base.cv.seed = seed;
    RunConfig c = config.empty() ? base : load_run_config(config, base);
    c.cv.seed = seed;
    return c;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master random seed")->capture_default_str();
  app->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
}

dataset::FeatureTable load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  return dataset::read_features_csv(in);
}

std::vector<dataset::LabelRow> load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  return dataset::read_labels_csv(in);
}

int cmd_extract(const std::vector<std::string>& inputs, const std::string& out, const Common& common) {
  const RunConfig cfg = common.run_config();
  const auto files = session_files(inputs);
  if (files.empty()) {
    std::cerr << "inkscreen extract: no sessions found\n";
    return 1;
  }
  std::vector<features::SessionFeatureVector> rows;
  int failures = 0;
  for (const auto& f : files) {
    try {
      const DrawingSession s = parse_session(read_file(f));
      rows.push_back(features::extract_session_features(s, {cfg.smoothing_window}));
    } catch (const std::exception& e) {
      std::cerr << f.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  std::ostringstream csv;
  dataset::write_features_csv(csv, rows);
  emit(out, csv.str());
  return failures == 0 ? 0 : 1;
}

dataset::LabeledData load_target(const std::string& features, const std::string& labels,
                                 const std::string& target) {
  const auto t = dataset::parse_target(target);
  if (!t) throw Error(ErrorCode::BadSpec, "unknown target '" + target + "'");
  const auto labels_rows = load_labels(labels);
  return dataset::build_target(load_features(features), labels_rows, *t);
}

int cmd_evaluate(const std::string& features, const std::string& labels, const std::string& target,
                 const std::string& out, const Common& common) {
  const auto data = load_target(features, labels, target);
  const RunConfig cfg = common.run_config();
  json report = eval::to_json(eval::nested_cv(data.X, data.y, data.task, data.n_classes, cfg.cv));
  report["target"] = target;
  emit(out, report.dump(2) + "\n");
  return 0;
}

int cmd_permtest(const std::string& features, const std::string& labels, const std::string& target,
                 int n_perm, const std::string& out, const Common& common) {
  const auto data = load_target(features, labels, target);
  const RunConfig cfg = common.run_config();
  json report = eval::to_json(
      eval::permutation_test(data.X, data.y, data.task, data.n_classes, cfg.cv, n_perm, common.seed));
  report["target"] = target;
  emit(out, report.dump(2) + "\n");
  return 0;
}

int cmd_train(const std::string& features, const std::string& labels, const std::string& out, bool with_cv,
              const std::string& timestamp, const Common& common) {
  const RunConfig cfg = common.run_config();
  bundle::TrainOptions opts;
  opts.config = cfg.cv;
  opts.smoothing_window = cfg.smoothing_window;
  opts.with_cv = with_cv;
  opts.timestamp = timestamp.empty() ? utc_now() : timestamp;
  const auto labels_rows = load_labels(labels);
  bundle::save_bundle(bundle::train_bundle(load_features(features), labels_rows, opts), out);
  return 0;
}

int cmd_predict(const std::string& bundle_path, const std::vector<std::string>& sessions,
                const std::string& features, const std::string& out) {
  const bundle::TrainedBundle b = bundle::load_bundle(bundle_path);
  dataset::FeatureTable table;
  int failures = 0;
  if (!features.empty()) {
    table = load_features(features);
  } else {
    std::vector<features::SessionFeatureVector> rows;
    for (const auto& f : session_files(sessions)) {
      try {
        rows.push_back(features::extract_session_features(parse_session(read_file(f)), {b.smoothing_window}));
      } catch (const std::exception& e) {
        std::cerr << f.string() << ": " << e.what() << '\n';
        ++failures;
      }
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features::kSessionFeatures));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      table.ids.push_back(rows[i].session_id);
      table.values.row(static_cast<Eigen::Index>(i)) = rows[i].values.transpose();
    }
  }
  json preds = json::array();
  for (const auto& p : bundle::predict(b, table)) preds.push_back(bundle::to_json(p));
  emit(out, json{{"schema_version", 1}, {"predictions", std::move(preds)}}.dump(2) + "\n");
  return failures == 0 ? 0 : 1;
}

struct SynthArgs {
  int n = 1;
  std::string out_dir = "sessions";
  std::string spec;
  std::string labels;
  std::string layouts_out;
  std::vector<double> theta_range;
  double theta = -1.0;
  bool reference = false;
};

int cmd_synth(const SynthArgs& a, const Common& common) {
  synth::CohortSpec spec;
  if (!a.spec.empty()) spec = synth::cohort_spec_from_json(json::parse(read_file(a.spec)));
  if (!a.layouts_out.empty()) {
    emit(a.layouts_out, synth::layouts_to_json(spec.layouts).dump(1) + "\n");
    return 0;
  }
  synth::ThetaDistribution dist = synth::FixedTheta{spec.theta};
  if (a.reference) dist = synth::reference_strata();
  else if (a.theta_range.size() == 2) dist = synth::UniformTheta{a.theta_range[0], a.theta_range[1]};
  else if (a.theta >= 0.0) dist = synth::FixedTheta{a.theta};
  const int n = a.reference ? 145 : a.n;
  const synth::Cohort cohort = synth::generate_cohort(n, dist, common.seed, spec);
  fs::create_directories(a.out_dir);
  for (const auto& m : cohort.members) {
    emit((fs::path(a.out_dir) / (m.session.session_id + ".json")).string(), serialize_session(m.session));
  }
  if (!a.labels.empty()) {
    std::ostringstream csv;
    synth::write_labels_csv(csv, cohort);
    emit(a.labels, csv.str());
  }
  std::cerr << "wrote " << cohort.members.size() << " sessions to " << a.out_dir << '\n';
  return 0;
}

service::HttpServer* g_server = nullptr;

int cmd_serve(const std::string& bundle_path, const std::string& addr, const std::string& store_dir) {
  service::ServiceOptions opts;
  opts.store_dir = store_dir;
  if (!bundle_path.empty()) opts.bundle = bundle::load_bundle(bundle_path);
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::BadSpec, "--addr must be host:port");
  const std::string host = addr.substr(0, colon);
  const int port = std::stoi(addr.substr(colon + 1));
  service::HttpServer server(std::move(opts));
  const int bound = server.bind(host, port);
  if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + addr);
  std::cerr << "listening on " << host << ':' << bound << (bundle_path.empty() ? " (no bundle)" : "") << '\n';
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  server.run();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pen-stroke drawing analysis for dementia screening"};
  app.require_subcommand(1);
  Common common;

  std::vector<std::string> inputs;
  std::string out, features_csv, labels_csv, target = "diagnosis", bundle_path, timestamp;
  int n_perm = 100;
  bool with_cv = false;

  auto* extract = app.add_subcommand("extract", "Session files or directories -> features CSV");
  extract->add_option("inputs", inputs, "Session files or directories")->required();
  extract->add_option("-o,--out", out, "Output CSV (default stdout)");
  add_common(extract, common);

  auto* evaluate = app.add_subcommand("evaluate", "Nested cross-validation report");
  auto* permtest = app.add_subcommand("permtest", "Permutation test of the nested-CV headline metric");
  for (auto* sub : {evaluate, permtest}) {
    sub->add_option("--features", features_csv, "Features CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--labels", labels_csv, "Labels CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--target", target,
                    "diagnosis | cn_vs_mci | cn_vs_dementia | mci_vs_dementia | mmse | mtl")
        ->capture_default_str();
    sub->add_option("-o,--out", out, "Output JSON (default stdout)");
    add_common(sub, common);
  }
  permtest->add_option("--n-perm", n_perm, "Number of label permutations")->capture_default_str();

  auto* train = app.add_subcommand("train", "Fit the diagnosis, MMSE and MTL models into a bundle");
  train->add_option("--features", features_csv, "Features CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--labels", labels_csv, "Labels CSV")->required()->check(CLI::ExistingFile);
  train->add_option("-o,--out", out, "Bundle path")->required();
  train->add_flag("--with-cv", with_cv, "Also store nested-CV reports in the bundle");
  train->add_option("--timestamp", timestamp, "Metadata timestamp (default: now, UTC)");
  add_common(train, common);

  auto* predict = app.add_subcommand("predict", "Apply a bundle to sessions or a features CSV");
  predict->add_option("--bundle", bundle_path, "Bundle path")->required()->check(CLI::ExistingFile);
  auto* sessions_opt = predict->add_option("sessions", inputs, "Session files or directories");
  auto* features_opt = predict->add_option("--features", features_csv, "Features CSV")->check(CLI::ExistingFile);
  sessions_opt->excludes(features_opt);
  predict->add_option("-o,--out", out, "Output JSON (default stdout)");
  add_common(predict, common);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic cohort");
  synth->add_option("-n", synth_args.n, "Number of sessions")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--out-dir", synth_args.out_dir, "Directory for session files")->capture_default_str();
  synth->add_option("--spec", synth_args.spec, "JSON CohortSpec overrides")->check(CLI::ExistingFile);
  synth->add_option("--labels", synth_args.labels, "Write the labels CSV here");
  synth->add_option("--theta", synth_args.theta, "Fixed impairment level")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--theta-range", synth_args.theta_range, "Uniform impairment range LOW HIGH")->expected(2);
  synth->add_flag("--reference-strata", synth_args.reference, "145 sessions in 46/67/32 CN/MCI/DEMENTIA bands");
  synth->add_option("--write-layouts", synth_args.layouts_out, "Only write the task layout file");
  add_common(synth, common);

  std::string addr = "127.0.0.1:8080", store_dir = "session_store";
  auto* serve = app.add_subcommand("serve", "Run the screening HTTP service");
  serve->add_option("--bundle", bundle_path, "Bundle path")->check(CLI::ExistingFile);
  serve->add_option("--addr", addr, "host:port")->capture_default_str();
  serve->add_option("--store-dir", store_dir, "Session store directory")->capture_default_str();
  add_common(serve, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) return cmd_extract(inputs, out, common);
    if (*evaluate) return cmd_evaluate(features_csv, labels_csv, target, out, common);
    if (*permtest) return cmd_permtest(features_csv, labels_csv, target, n_perm, out, common);
    if (*train) return cmd_train(features_csv, labels_csv, out, with_cv, timestamp, common);
    if (*predict) {
      if (inputs.empty() && features_csv.empty()) throw Error(ErrorCode::BadSpec, "give session files or --features");
      return cmd_predict(bundle_path, inputs, features_csv, out);
    }
    if (*synth) return cmd_synth(synth_args, common);
    if (*serve) return cmd_serve(bundle_path, addr, store_dir);
  } catch (const std::exception& e) {
    std::cerr << "inkscreen: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
