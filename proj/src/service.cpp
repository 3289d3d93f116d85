#include "inkscreen/service.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "inkscreen/error.hpp"
#include "inkscreen/features.hpp"

namespace inkscreen::service {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ApiResponse respond(int status, json body) {
  body["schema_version"] = kApiSchemaVersion;
  return {status, std::move(body)};
}

ApiResponse error(int status, std::string_view code, const std::string& message) {
  return respond(status, {{"error", code}, {"message", message}});
}

json nullable(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

bool SessionStore::valid_id(std::string_view id) {
  return id.size() == 16 &&
         id.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

std::string SessionStore::put(const DrawingSession& session) const {
  static std::atomic<unsigned long> counter{0};
  const std::string bytes = serialize_session(session);
  char id[20];
  std::snprintf(id, sizeof id, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  const fs::path target = dir_ / (std::string(id) + ".json");
  if (fs::exists(target)) return id;
  const fs::path tmp =
      dir_ / ("." + std::string(id) + "." +
              std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
              std::to_string(counter++) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    out << bytes;
    if (!out) throw Error(ErrorCode::Io, "cannot write session store file");
  }
  fs::rename(tmp, target);
  return id;
}

std::optional<DrawingSession> SessionStore::get(std::string_view id) const {
  if (!valid_id(id)) return std::nullopt;
  std::ifstream in(dir_ / (std::string(id) + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_session(buf.str());
}

ScreeningApi::ScreeningApi(ServiceOptions options)
    : options_(std::move(options)), store_(options_.store_dir) {
  if (options_.bundle) extraction_.smoothing_window = options_.bundle->smoothing_window;
}

ApiResponse ScreeningApi::post_session(std::string_view body) const {
  if (body.size() > options_.max_body) {
    return error(413, "PayloadTooLarge", "body exceeds " + std::to_string(options_.max_body) + " bytes");
  }
  try {
    const DrawingSession session = parse_session(body);
    const std::string id = store_.put(session);
    const ValidationReport v = validate_session(session);
    json missing = json::array();
    for (TaskKind t : v.missing_tasks) missing.push_back(task_name(t));
    return respond(201, {{"id", id}, {"session_id", session.session_id}, {"missing_tasks", std::move(missing)}});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) return error(500, to_string(e.code()), e.what());
    return error(400, to_string(e.code()), e.what());
  }
}

ApiResponse ScreeningApi::get_features(std::string_view id) const {
  const auto session = store_.get(id);
  if (!session) return error(404, "NotFound", "unknown session id");
  const auto fv = features::extract_session_features(*session, extraction_);
  json values = json::array();
  for (Eigen::Index j = 0; j < fv.values.size(); ++j) values.push_back(nullable(fv.values(j)));
  return respond(200, {{"id", id},
                       {"columns", features::session_column_names()},
                       {"values", std::move(values)},
                       {"missing_mask", fv.missing}});
}

ApiResponse ScreeningApi::get_screening(std::string_view id) const {
  if (!options_.bundle) return error(503, "NoBundle", "no model bundle loaded");
  const auto session = store_.get(id);
  if (!session) return error(404, "NotFound", "unknown session id");
  const auto fv = features::extract_session_features(*session, extraction_);
  const bundle::Prediction p = bundle::predict(*options_.bundle, fv);

  json highlights = json::array();
  for (TaskKind task : kAllTasks) {
    auto value = [&](const char* name) {
      const auto idx = features::feature_index(name);
      return nullable(fv.values(static_cast<Eigen::Index>(task_index(task) * features::kFeaturesPerTask + *idx)));
    };
    highlights.push_back({{"task", task_name(task)},
                          {"speed_median", value("speed_median")},
                          {"pause_mean", value("pause_mean")},
                          {"pressure_median", value("pressure_median")}});
  }
  return respond(200, {{"id", id},
                       {"probabilities",
                        {{"CN", p.probabilities[0]}, {"MCI", p.probabilities[1]}, {"DEMENTIA", p.probabilities[2]}}},
                       {"mmse", p.mmse},
                       {"mtl_z", p.mtl_z},
                       {"highlights", std::move(highlights)}});
}

ApiResponse ScreeningApi::get_tasks() const {
  json body = synth::layouts_to_json(options_.layouts);
  return respond(200, std::move(body));
}

ApiResponse ScreeningApi::handle(std::string_view method, std::string_view path, std::string_view body) const {
  constexpr std::string_view prefix = "/api/v1/";
  if (path.substr(0, prefix.size()) != prefix) return error(404, "NotFound", "unknown route");
  std::string_view rest = path.substr(prefix.size());
  if (rest == "tasks") {
    return method == "GET" ? get_tasks() : error(405, "MethodNotAllowed", "use GET");
  }
  if (rest == "sessions") {
    return method == "POST" ? post_session(body) : error(405, "MethodNotAllowed", "use POST");
  }
  constexpr std::string_view sessions = "sessions/";
  if (rest.substr(0, sessions.size()) == sessions) {
    rest.remove_prefix(sessions.size());
    const auto slash = rest.find('/');
    if (slash != std::string_view::npos) {
      const std::string_view id = rest.substr(0, slash);
      const std::string_view leaf = rest.substr(slash + 1);
      if (leaf == "features" || leaf == "screening") {
        if (method != "GET") return error(405, "MethodNotAllowed", "use GET");
        return leaf == "features" ? get_features(id) : get_screening(id);
      }
    }
  }
  return error(404, "NotFound", "unknown route");
}

struct HttpServer::Impl {
  explicit Impl(ServiceOptions options) : api(std::move(options)) {}

  ScreeningApi api;
  httplib::Server server;
};

HttpServer::HttpServer(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  auto& srv = impl_->server;
  const ScreeningApi& api = impl_->api;
  // One byte over the limit still reaches the handler, which answers 413 with a JSON body.
  srv.set_payload_max_length(api.max_body() + 1);
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  const auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r;
    try {
      r = api.handle(req.method, req.path, req.body);
    } catch (const std::exception& e) {
      r = error(500, "Internal", e.what());
    }
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  srv.Get(R"(/api/v1/.*)", forward);
  srv.Post(R"(/api/v1/.*)", forward);
  srv.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace inkscreen::service
