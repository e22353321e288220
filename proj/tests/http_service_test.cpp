#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "rcdose/cli.hpp"
#include "rcdose/http_service.hpp"
#include "rcdose/json_codec.hpp"
#include "rcdose/session_store.hpp"

namespace rcdose {
namespace {

namespace fs = std::filesystem;

// A live server on an ephemeral localhost port for the lifetime of the fixture.
class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { start(std::nullopt); }
  void TearDown() override { stop(); }

  void start(std::optional<fs::path> dir) {
    store_ = std::make_unique<SessionStore>(dir);
    store_->load_all();
    service_ = std::make_unique<Service>(*store_);
    server_ = std::make_unique<httplib::Server>();
    service_->install(*server_);
    port_ = server_->bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void stop() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  std::pair<int, Json> get(const std::string& path) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res) << path;
    return {res->status, Json::parse(res->body)};
  }

  std::pair<int, Json> post(const std::string& path, const std::string& body = "") {
    auto res = client_->Post(path, body, "application/json");
    EXPECT_TRUE(res) << path;
    return {res->status, Json::parse(res->body)};
  }

  std::string create(const Json& body) {
    auto [status, j] = post("/trials", body.dump());
    EXPECT_EQ(status, 201) << j.dump();
    return j.at("id").get<std::string>();
  }

  Json record(const std::string& id, int size, int dlts, int expect = 200) {
    auto [status, j] = post("/trials/" + id + "/outcomes", Json{{"size", size}, {"dlts", dlts}}.dump());
    EXPECT_EQ(status, expect) << j.dump();
    return j;
  }

  std::unique_ptr<SessionStore> store_;
  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

std::set<int> as_set(const Json& j) { return j.get<std::set<int>>(); }

TEST_F(ServiceTest, CreateReportsStay) {
  auto [status, j] = post("/trials", R"({"doses":3})");
  EXPECT_EQ(status, 201);
  EXPECT_EQ(j["next_decision"], "sta");
  EXPECT_EQ(j["state"]["text"], "[0/0]-[0/0,0/0]");
  EXPECT_EQ(j["state"]["lower"], Json::parse(R"([{"t":0,"n":0}])"));
  EXPECT_EQ(j["status"], "active");
  EXPECT_TRUE(j["recommendation"].is_null());
  EXPECT_EQ(j["journal"].size(), 1u);
  EXPECT_EQ(j["journal"][0]["kind"], "created");
}

TEST_F(ServiceTest, OutcomeConcludesTrial) {
  const std::string id = create({{"doses", 2}});
  const Json j = record(id, 3, 2);
  EXPECT_EQ(j["status"], "concluded");
  EXPECT_EQ(j["recommendation"], 0);
  EXPECT_EQ(j["path"], "[sta,[2/3]-[0/0],stop,recommend_dose(0)].");
  auto [status, again] = get("/trials/" + id);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(again["state"]["text"], "[2/3]-[0/0]");
  record(id, 3, 0, 409);
  EXPECT_EQ(get("/trials/" + id + "/whatif").first, 409);
}

TEST_F(ServiceTest, WhatIfUnionMatchesReachableRecommendations) {
  const std::string id = create({{"doses", 3}});
  for (auto [size, dlts] : std::vector<std::pair<int, int>>{{3, 0}, {3, 0}, {3, 0}})
    record(id, size, dlts);
  auto [status, w] = get("/trials/" + id + "/whatif");
  ASSERT_EQ(status, 200);
  EXPECT_EQ(w["state"]["text"], "[0/3,0/3,0/3]-[]");
  EXPECT_EQ(w["decision"], "sta");
  std::set<int> all;
  for (const Json& row : w["outcomes"]) {
    const auto r = as_set(row["reachable_recommendations"]);
    all.insert(r.begin(), r.end());
  }
  EXPECT_EQ(all, (std::set<int>{0, 1, 2, 3}));

  record(id, 3, 2);
  auto [s2, st] = get("/trials/" + id);
  EXPECT_EQ(st["state"]["text"], "[2/6,0/3,0/3]-[]");
  EXPECT_EQ(as_set(st["reachable_recommendations"]), (std::set<int>{0, 1, 2}));
  auto [s3, w2] = get("/trials/" + id + "/whatif");
  all.clear();
  for (const Json& row : w2["outcomes"]) {
    const auto r = as_set(row["reachable_recommendations"]);
    all.insert(r.begin(), r.end());
  }
  EXPECT_EQ(all, (std::set<int>{0, 1, 2}));
}

TEST_F(ServiceTest, WhatIfRowsOnFreshTrials) {
  auto [s1, w] = get("/trials/" + create({{"doses", 2}}) + "/whatif");
  ASSERT_EQ(w["outcomes"].size(), 4u);
  for (const Json& row : w["outcomes"]) {
    EXPECT_EQ(row["size"], 3);
    if (row["dlts"] == 2) {
      EXPECT_EQ(row["status"], "concluded");
      EXPECT_EQ(row["recommendation"], 0);
    }
  }
  auto [s2, rolling] = get("/trials/" + create({{"doses", 2}, {"cohort_sizes", {3, 2, 1}}}) + "/whatif");
  std::set<int> sizes;
  for (const Json& row : rolling["outcomes"]) sizes.insert(row["size"].get<int>());
  EXPECT_EQ(sizes, (std::set<int>{1, 2, 3}));
  EXPECT_EQ(rolling["outcomes"].size(), 9u);
}

TEST_F(ServiceTest, UndoAndErrors) {
  const std::string id = create({{"doses", 2}});
  EXPECT_EQ(post("/trials/" + id + "/undo").first, 409);
  record(id, 3, 1);
  auto [status, j] = post("/trials/" + id + "/undo");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(j["state"]["text"], "[0/0]-[0/0]");
  EXPECT_EQ(j["journal"].size(), 3u);
  EXPECT_EQ(j["journal"][2]["kind"], "undone");

  record(id, 2, 0, 422);
  record(id, 3, 4, 422);
  EXPECT_EQ(post("/trials/" + id + "/outcomes", "{not json").first, 400);
  EXPECT_EQ(post("/trials/" + id + "/outcomes", R"({"size":3})").first, 400);
  EXPECT_EQ(get("/trials/0123456789abcdef").first, 404);
  EXPECT_EQ(post("/trials/0123456789abcdef/outcomes", R"({"size":3,"dlts":0})").first, 404);
  EXPECT_EQ(post("/trials", R"({"doses":0})").first, 400);
  EXPECT_EQ(post("/trials", R"({"doses":2,"cohort_sizes":[]})").first, 400);
  EXPECT_EQ(post("/trials", R"([1,2])").first, 400);
}

TEST_F(ServiceTest, RollingOverflowIs422) {
  const std::string id = create({{"doses", 1}, {"cohort_sizes", {3, 2, 1}}});
  record(id, 3, 0);
  record(id, 2, 0);
  record(id, 2, 0, 422);
  EXPECT_EQ(record(id, 1, 0)["status"], "concluded");
}

TEST_F(ServiceTest, ProtocolPaths) {
  auto [status, j] = get("/protocol/paths?doses=2");
  ASSERT_EQ(status, 200);
  EXPECT_EQ(j["count"], 46);
  EXPECT_EQ(j["paths"].size(), 46u);
  EXPECT_EQ(j["paths"][0], "[sta,[0/3]-[0/0],esc,[0/3,0/3]-[],sta,[0/6,0/3]-[],stop,recommend_dose(2)].");
  auto [s2, c] = get("/protocol/paths?doses=4&count_only=1");
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(c["count"], 442);
  EXPECT_FALSE(c.contains("paths"));
  auto [s3, r] = get("/protocol/paths?doses=2&cohorts=3,2,1&count_only=1");
  EXPECT_EQ(r["count"], 40529);
  EXPECT_EQ(get("/protocol/paths?doses=5").first, 422);
  EXPECT_EQ(get("/protocol/paths?doses=3&cohorts=3,2,1").first, 422);  // too many to list
  EXPECT_EQ(get("/protocol/paths?doses=4&cohorts=3,2,1&count_only=1").first, 200);
  EXPECT_EQ(get("/protocol/paths").first, 400);
  EXPECT_EQ(get("/protocol/paths?doses=x").first, 400);
  EXPECT_EQ(get("/protocol/paths?doses=2&cohorts=3,,1").first, 400);
}

TEST_F(ServiceTest, ProtocolVerify) {
  auto [status, j] = get("/protocol/verify?property=safety&doses=1..4");
  ASSERT_EQ(status, 200);
  EXPECT_EQ(j["holds"], true);
  EXPECT_EQ(j["paths_examined"], 652);
  EXPECT_TRUE(j["counterexamples"].empty());
  auto [s2, d] = get("/protocol/verify?property=determinism&doses=2");
  EXPECT_EQ(d["states_examined"], 47);
  EXPECT_EQ(get("/protocol/verify?property=liveness&doses=1..2&cohorts=3,2,1").first, 200);
  EXPECT_EQ(get("/protocol/verify?property=liveness&doses=1..3&cohorts=3,2,1").first, 422);
  EXPECT_EQ(get("/protocol/verify?property=safety&doses=1..8").first, 422);
  EXPECT_EQ(get("/protocol/verify?property=bogus").first, 400);
  EXPECT_EQ(get("/protocol/verify").first, 400);
}

TEST_F(ServiceTest, CliAndHttpAgreeOnJournalSeededStates) {
  std::mt19937 rng(5);
  for (int i = 0; i < 40; ++i) {
    const bool rolling = i % 2;
    Json body{{"doses", 1 + static_cast<int>(rng() % 4)}};
    if (rolling) body["cohort_sizes"] = {3, 2, 1};
    const std::string id = create(body);
    for (int step = 0; step < 6; ++step) {
      auto [status, st] = get("/trials/" + id);
      if (st["status"] == "concluded") break;
      const int size = rolling ? 1 + static_cast<int>(rng() % 3) : 3;
      const int dlts = static_cast<int>(rng() % (size + 1));
      auto res = client_->Post("/trials/" + id + "/outcomes",
                               Json{{"size", size}, {"dlts", dlts}}.dump(), "application/json");
      ASSERT_TRUE(res->status == 200 || res->status == 422) << res->body;
    }
    auto [status, st] = get("/trials/" + id);
    std::vector<std::string> args{"next", "--state", st["state"]["text"].get<std::string>()};
    if (rolling) args.insert(args.end(), {"--cohorts", "3,2,1"});
    std::ostringstream out, err;
    ASSERT_EQ(cli_dispatch(args, out, err), 0) << err.str();
    EXPECT_EQ(out.str(), st["next_decision"].get<std::string>() + "\n");
  }
}

TEST(ServicePersistence, RestartReplaysJournals) {
  const fs::path dir = fs::temp_directory_path() / ("rcdose-http-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::string id;
  {
    SessionStore store(dir);
    id = store.create({}, 3)->id;
    store.record(id, 3, 0);
    store.record(id, 3, 1);
  }
  SessionStore store(dir);
  ASSERT_EQ(store.load_all(), 1u);
  Service service(store);
  httplib::Server server;
  service.install(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/trials/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const Json j = Json::parse(res->body);
  EXPECT_EQ(j["state"]["text"], "[1/3,0/3]-[0/0]");
  EXPECT_EQ(j["next_decision"], "sta");
  server.stop();
  t.join();
  fs::remove_all(dir);
}

}  // namespace
}  // namespace rcdose
