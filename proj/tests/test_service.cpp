#include <gtest/gtest.h>

#include <thread>

#include "inkscreen/service.hpp"
#include "support/cohort.hpp"

// After Eigen: resolv.h, pulled in here, defines a _res macro.
#include <httplib.h>

using namespace inkscreen;
using namespace inkscreen::service;
using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto data = fixtures::labeled_cohort(45, synth::StratifiedTheta{{15, 15, 15}, {{0, 0.2}, {0.42, 0.58}, {0.8, 1}}}, 8);
    bundle_ = new bundle::TrainedBundle(bundle::train_bundle(data.table, data.labels, fixtures::quick_train_options(1)));
  }
  static void TearDownTestSuite() { delete bundle_; }

  void SetUp() override { dir_ = fixtures::temp_dir("store"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  ServiceOptions options(bool with_bundle) const {
    ServiceOptions o;
    o.store_dir = dir_;
    if (with_bundle) o.bundle = *bundle_;
    return o;
  }

  static std::string session_text(double theta, std::uint64_t seed) {
    synth::CohortSpec spec;
    spec.theta = theta;
    return serialize_session(synth::generate_session(spec, seed));
  }

  static bundle::TrainedBundle* bundle_;
  std::filesystem::path dir_;
};

bundle::TrainedBundle* ServiceTest::bundle_ = nullptr;

}  // namespace

TEST_F(ServiceTest, PostThenFetchFeaturesAndScreening) {
  const ScreeningApi api(options(true));
  const ApiResponse post = api.handle("POST", "/api/v1/sessions", session_text(0.3, 4));
  ASSERT_EQ(post.status, 201) << post.body.dump();
  const std::string id = post.body["id"];
  EXPECT_TRUE(SessionStore::valid_id(id));
  EXPECT_TRUE(post.body["missing_tasks"].empty());
  EXPECT_EQ(post.body["schema_version"], kApiSchemaVersion);

  const ApiResponse feats = api.handle("GET", "/api/v1/sessions/" + id + "/features", "");
  ASSERT_EQ(feats.status, 200);
  EXPECT_EQ(feats.body["columns"].size(), 190u);
  EXPECT_EQ(feats.body["values"].size(), 190u);
  EXPECT_EQ(feats.body["missing_mask"].size(), 190u);

  const ApiResponse scr = api.handle("GET", "/api/v1/sessions/" + id + "/screening", "");
  ASSERT_EQ(scr.status, 200);
  const auto& p = scr.body["probabilities"];
  EXPECT_NEAR(p["CN"].get<double>() + p["MCI"].get<double>() + p["DEMENTIA"].get<double>(), 1.0, 1e-9);
  EXPECT_TRUE(scr.body["mmse"].is_number());
  EXPECT_TRUE(scr.body["mtl_z"].is_number());
  EXPECT_EQ(scr.body["highlights"].size(), 5u);
  // Repeated GETs are byte-identical.
  EXPECT_EQ(api.handle("GET", "/api/v1/sessions/" + id + "/screening", "").body.dump(), scr.body.dump());
  // Identical content gets the same id.
  EXPECT_EQ(api.handle("POST", "/api/v1/sessions", session_text(0.3, 4)).body["id"], id);
}

TEST_F(ServiceTest, PartialSessionIsMasked) {
  const ScreeningApi api(options(false));
  DrawingSession s = synth::generate_session({}, 12);
  std::erase_if(s.recordings, [](const TaskRecording& r) { return r.task() != TaskKind::TmtA; });
  const ApiResponse post = api.post_session(serialize_session(s));
  ASSERT_EQ(post.status, 201);
  EXPECT_EQ(post.body["missing_tasks"].size(), 4u);
  const ApiResponse f = api.get_features(post.body["id"].get<std::string>());
  int masked = 0;
  for (const auto& m : f.body["missing_mask"]) masked += m.get<bool>();
  EXPECT_EQ(masked, 152);
  for (std::size_t i = 0; i < 190; ++i) {
    EXPECT_EQ(f.body["missing_mask"][i].get<bool>(), f.body["values"][i].is_null());
  }
}

TEST_F(ServiceTest, ErrorStatuses) {
  const ScreeningApi api(options(false));
  const ApiResponse bad = api.post_session("{oops");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(bad.body["error"], "MalformedInput");
  std::string range = session_text(0.1, 2);
  const auto pos = range.find("\"p\":");
  ASSERT_NE(pos, std::string::npos);
  range.insert(pos + 4, "1");  // 0.x -> 10.x
  const ApiResponse rv = api.post_session(range);
  EXPECT_EQ(rv.status, 400);
  EXPECT_EQ(rv.body["error"], "RangeViolation");
  EXPECT_EQ(api.get_features("0000000000000000").status, 404);
  EXPECT_EQ(api.get_features("../../etc/passwd").status, 404);
  EXPECT_EQ(api.handle("GET", "/api/v1/nothing", "").status, 404);
  EXPECT_EQ(api.handle("DELETE", "/api/v1/tasks", "").status, 405);

  const ApiResponse ok = api.post_session(session_text(0.1, 2));
  ASSERT_EQ(ok.status, 201);
  EXPECT_EQ(api.get_screening(ok.body["id"].get<std::string>()).status, 503);
  const ApiResponse tasks = api.get_tasks();
  EXPECT_EQ(tasks.status, 200);
  EXPECT_EQ(tasks.body["tasks"].size(), 5u);

  ServiceOptions small = options(false);
  small.max_body = 100;
  EXPECT_EQ(ScreeningApi(small).post_session(std::string(101, ' ')).status, 413);
}

TEST_F(ServiceTest, HttpRoundTrip) {
  HttpServer server(options(true));
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.run(); });
  server.wait_until_ready();
  httplib::Client cli("127.0.0.1", port);
  const auto post = cli.Post("/api/v1/sessions", session_text(0.95, 31), "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 201);
  EXPECT_EQ(post->get_header_value("Access-Control-Allow-Origin"), "*");
  const std::string id = json::parse(post->body)["id"];
  const auto scr = cli.Get("/api/v1/sessions/" + id + "/screening");
  ASSERT_TRUE(scr);
  EXPECT_EQ(scr->status, 200);
  const auto body = json::parse(scr->body);
  const auto& p = body["probabilities"];
  EXPECT_NEAR(p["CN"].get<double>() + p["MCI"].get<double>() + p["DEMENTIA"].get<double>(), 1.0, 1e-9);
  const auto missing = cli.Get("/api/v1/sessions/ffffffffffffffff/features");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  const auto opts = cli.Options("/api/v1/sessions");
  ASSERT_TRUE(opts);
  EXPECT_EQ(opts->status, 204);
  server.stop();
  t.join();
}

TEST_F(ServiceTest, OversizedBodyOverHttpGets413) {
  ServiceOptions o = options(false);
  o.max_body = 1000;
  HttpServer server(o);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.run(); });
  server.wait_until_ready();
  httplib::Client cli("127.0.0.1", port);
  const auto res = cli.Post("/api/v1/sessions", std::string(5000, 'x'), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 413);
  const auto tasks = cli.Get("/api/v1/tasks");
  ASSERT_TRUE(tasks);
  EXPECT_EQ(tasks->status, 200);
  server.stop();
  t.join();
}

TEST(SessionStoreIds, Validation) {
  EXPECT_TRUE(SessionStore::valid_id("0123456789abcdef"));
  EXPECT_FALSE(SessionStore::valid_id("0123456789ABCDEF"));
  EXPECT_FALSE(SessionStore::valid_id("0123"));
  EXPECT_FALSE(SessionStore::valid_id("../0123456789abc"));
}
