#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "inkscreen/bundle.hpp"
#include "inkscreen/stroke_model.hpp"
#include "inkscreen/synth.hpp"

namespace inkscreen::service {

inline constexpr int kApiSchemaVersion = 1;
inline constexpr std::size_t kDefaultMaxBody = 16u * 1024u * 1024u;

// Directory of session files named by a 16-hex-digit content hash.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  // Stores the canonical serialization; identical sessions share an id.
  // The file appears atomically (temp file + rename).
  std::string put(const DrawingSession& session) const;
  std::optional<DrawingSession> get(std::string_view id) const;

  static bool valid_id(std::string_view id);

 private:
  std::filesystem::path dir_;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::filesystem::path store_dir = "sessions";
  std::optional<bundle::TrainedBundle> bundle;
  std::size_t max_body = kDefaultMaxBody;
  synth::TaskLayouts layouts = synth::default_layouts();
};

// Transport-independent request handling; every body carries schema_version.
class ScreeningApi {
 public:
  explicit ScreeningApi(ServiceOptions options);

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

  ApiResponse post_session(std::string_view body) const;
  ApiResponse get_features(std::string_view id) const;
  ApiResponse get_screening(std::string_view id) const;
  ApiResponse get_tasks() const;

  std::size_t max_body() const { return options_.max_body; }

 private:
  ServiceOptions options_;
  SessionStore store_;
  features::ExtractionOptions extraction_;
};

// cpp-httplib front end with permissive CORS.
class HttpServer {
 public:
  explicit HttpServer(ServiceOptions options);
  ~HttpServer();

  // Returns the bound port (0 picks an ephemeral one), or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace inkscreen::service
