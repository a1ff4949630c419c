#include <gtest/gtest.h>

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "explorank/binning.hpp"
#include "explorank/histogram.hpp"
#include "explorank/search.hpp"
#include "explorank/service.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace explorank;
using json = nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto loaded = load_graph_files(fixture::data_path("tiny.edges.csv"), fixture::data_path("tiny.nodes.csv"),
                                   load_schema_file(fixture::data_path("tiny.schema.json")));
    graph_ = std::make_shared<const AttributedGraph>(std::move(loaded.graph));
    index_ = std::make_shared<const SurpriseIndex>(
        SurpriseIndex::build(*graph_, build_binnings(*graph_), std::vector<double>(graph_->feature_count(), 1.0)));
    service_ = std::make_unique<ExplorationService>(graph_, index_);
  }

  HttpResponse call(std::string method, std::string path, std::string body = {},
                    std::map<std::string, std::string> query = {}) {
    return service_->handle({std::move(method), std::move(path), std::move(query), std::move(body)});
  }

  json ok(std::string method, std::string path, std::string body = {}, std::map<std::string, std::string> query = {}) {
    const auto r = call(std::move(method), std::move(path), std::move(body), std::move(query));
    EXPECT_EQ(r.status, 200) << r.body;
    return json::parse(r.body);
  }

  std::string error_code(const HttpResponse& r) { return json::parse(r.body)["error"]["code"]; }

  std::shared_ptr<const AttributedGraph> graph_;
  std::shared_ptr<const SurpriseIndex> index_;
  std::unique_ptr<ExplorationService> service_;
};

}  // namespace

TEST_F(ServiceTest, GraphSummary) {
  const auto s = ok("GET", "/graph/summary");
  EXPECT_EQ(s["nodes"], 8);
  EXPECT_EQ(s["edges"], 12);
  ASSERT_EQ(s["features"].size(), 3u);
  EXPECT_EQ(s["features"][2]["name"], "genre");
  EXPECT_EQ(s["features"][2]["kind"], "categorical");
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s["features"][j]["bins"], index_->binnings()[j]->bin_count());
}

TEST_F(ServiceTest, PathGraphSummary) {
  auto loaded = load_graph_files(fixture::data_path("path.edges.tsv"), fixture::data_path("path.nodes.tsv"),
                                 load_schema_file(fixture::data_path("path.schema.json")));
  auto g = std::make_shared<const AttributedGraph>(std::move(loaded.graph));
  auto idx = std::make_shared<const SurpriseIndex>(SurpriseIndex::build(*g, build_binnings(*g), {1.0}));
  ExplorationService svc(g, idx);
  const auto s = json::parse(svc.handle({"GET", "/graph/summary", {}, {}}).body);
  EXPECT_EQ(s["nodes"], 3);
  EXPECT_EQ(s["edges"], 2);
}

TEST_F(ServiceTest, NodeDetail) {
  const auto n = ok("GET", "/nodes/m3", {}, {{"precision", "full"}});
  const NodeId m3 = graph_->require("m3");
  EXPECT_EQ(n["label"], "Heat");
  EXPECT_EQ(n["degree"], 3);
  EXPECT_EQ(n["values"]["genre"], "crime");
  EXPECT_EQ(n["values"]["year"], 1995.0);
  EXPECT_EQ(n["surprise"].get<double>(), index_->surprise(m3));
  EXPECT_EQ(n["surprise_by_feature"]["genre"].get<double>(), index_->feature_surprise(m3, 2));

  const auto missing = call("GET", "/nodes/zz");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(error_code(missing), "not_found");
}

TEST_F(ServiceTest, NeighborhoodSummary) {
  const auto s = ok("GET", "/nodes/m8/neighborhood-summary");
  ASSERT_EQ(s["features"].size(), 3u);
  for (const auto& f : s["features"]) {
    EXPECT_EQ(f["local"].size(), f["global"].size());
    double total = 0;
    for (double m : f["local"]) total += m;
    EXPECT_NEAR(total, 1.0, 1e-6);
    int point = 0;
    for (double m : f["local"]) point += m == 1.0;
    EXPECT_EQ(point, 1);
  }
  const auto e = ok("GET", "/nodes/m1/neighborhood-summary", {}, {{"exclude", "m2,m3"}, {"k", "10"}});
  for (const auto& row : e["top"]) {
    EXPECT_NE(row["id"], "m2");
    EXPECT_NE(row["id"], "m3");
  }
  EXPECT_EQ(e["top"].size(), 4u);
  EXPECT_TRUE(e["cold_start"].get<bool>());

  const auto full = ok("GET", "/nodes/m1/neighborhood-summary", {}, {{"precision", "full"}});
  const NodeId m1 = graph_->require("m1");
  for (std::size_t j = 0; j < 3; ++j) {
    const auto expect = oracle::recount(oracle::neighbor_values(*graph_, m1, j), *index_->binnings()[j]);
    for (std::size_t k = 0; k < expect.size(); ++k) {
      EXPECT_NEAR(full["features"][j]["local"][k].get<double>(), expect[k], 1e-15);
    }
  }
}

TEST_F(ServiceTest, ColdRankFlagsAndMatchesLibrary) {
  const auto r = ok("POST", "/sessions/s1/rank", R"({"focus":"m1","k":3})", {{"precision", "full"}});
  EXPECT_TRUE(r["cold_start"].get<bool>());
  EXPECT_EQ(r["mode"], "surprise");
  EXPECT_EQ(r["requested_mode"], "combined");
  ASSERT_EQ(r["results"].size(), 3u);

  const Ranker ranker(*graph_, *index_);
  const auto expect = ranker.cold_start_rank(index_->lambda(), graph_->require("m1"), 3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r["results"][i]["id"], graph_->external_id(expect[i].node));
    EXPECT_EQ(r["results"][i]["score"].get<double>(), expect[i].score);
    EXPECT_TRUE(r["results"][i]["interest"].is_null());
  }
}

TEST_F(ServiceTest, InterestOnColdSessionConflicts) {
  const auto r = call("POST", "/sessions/s1/rank", R"({"focus":"m1","mode":"interest"})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(error_code(r), "conflict");
}

TEST_F(ServiceTest, VisitsWarmTheSession) {
  const auto empty = ok("GET", "/sessions/s2/profile");
  EXPECT_EQ(empty["profile"], "empty");
  EXPECT_EQ(empty["visit_count"], 0);
  auto v = ok("POST", "/sessions/s2/visits", R"({"node":"m3"})");
  EXPECT_EQ(v["visit_count"], 1);
  v = ok("POST", "/sessions/s2/visits", R"({"node":"m3"})");
  EXPECT_EQ(v["visit_count"], 2);
  ok("POST", "/sessions/s2/visits", R"({"node":"m4"})");
  ok("POST", "/sessions/s2/visits", R"({"node":"m5"})");
  v = ok("POST", "/sessions/s2/visits", R"({"node":"m6"})", {{"precision", "full"}});
  EXPECT_EQ(v["visit_count"], 5);
  EXPECT_FALSE(v["cold_start"].get<bool>());
  const std::vector<std::string> visits{"m3", "m3", "m4", "m5", "m6"};
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<double> vals;
    for (const auto& id : visits) vals.push_back(graph_->value(graph_->require(id), j));
    const auto expect = oracle::recount(vals, *index_->binnings()[j]);
    for (std::size_t k = 0; k < expect.size(); ++k) {
      EXPECT_NEAR(v["profile"][j]["mass"][k].get<double>(), expect[k], 1e-15);
    }
  }

  const auto r = ok("POST", "/sessions/s2/rank", R"({"focus":"m1","k":10,"exclude":["m7"]})", {{"precision", "full"}});
  EXPECT_FALSE(r["cold_start"].get<bool>());
  EXPECT_EQ(r["mode"], "combined");

  SessionProfile p("s2", index_->binnings());
  for (const auto& id : visits) p.record_visit(*graph_, graph_->require(id));
  const Ranker ranker(*graph_, *index_);
  const auto expect = ranker.rank_neighbors(p, {graph_->require("m1"), 10, RankMode::combined, {graph_->require("m7")}});
  ASSERT_EQ(r["results"].size(), expect.neighbors.size());
  for (std::size_t i = 0; i < expect.neighbors.size(); ++i) {
    EXPECT_EQ(r["results"][i]["id"], graph_->external_id(expect.neighbors[i].node));
    EXPECT_EQ(r["results"][i]["score"].get<double>(), expect.neighbors[i].score);
    EXPECT_NE(r["results"][i]["id"], "m7");
  }
  EXPECT_EQ(call("POST", "/sessions/s2/rank", R"({"focus":"m1","mode":"interest"})").status, 200);
}

TEST_F(ServiceTest, WeightsValidateAtomically) {
  EXPECT_EQ(ok("PUT", "/sessions/w/weights", R"({"lambda":{"genre":2.0},"w_s":0.25,"w_r":0.75})")["ok"], true);
  auto p = ok("GET", "/sessions/w/profile");
  EXPECT_EQ(p["lambda"]["genre"], 2.0);
  EXPECT_EQ(p["blend"]["w_r"], 0.75);

  auto bad = call("PUT", "/sessions/w/weights", R"({"lambda":{"year":5.0},"w_s":0.9,"w_r":0.9})");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(error_code(bad), "invalid_request");
  p = ok("GET", "/sessions/w/profile");
  EXPECT_EQ(p["lambda"]["year"], 1.0);
  EXPECT_EQ(p["blend"]["w_s"], 0.25);

  EXPECT_EQ(call("PUT", "/sessions/w/weights", R"({"lambda":{"year":0,"rating":0,"genre":0}})").status, 400);
  EXPECT_EQ(call("PUT", "/sessions/w/weights", R"({"lambda":{"nope":1}})").status, 400);
  EXPECT_EQ(call("PUT", "/sessions/w/weights", R"({"lambda":{"year":-1}})").status, 400);
}

TEST_F(ServiceTest, SurpriseOnlyBlendEqualsSurpriseRanking) {
  for (const char* v : {"m3", "m4", "m5"}) ok("POST", "/sessions/b/visits", std::string(R"({"node":")") + v + "\"}");
  ok("PUT", "/sessions/b/weights", R"({"w_s":1,"w_r":0})");
  const auto combined = ok("POST", "/sessions/b/rank", R"({"focus":"m1","k":10})");
  const auto surprise = ok("POST", "/sessions/b/rank", R"({"focus":"m1","k":10,"mode":"surprise"})");
  ASSERT_EQ(combined["results"].size(), surprise["results"].size());
  for (std::size_t i = 0; i < combined["results"].size(); ++i) {
    EXPECT_EQ(combined["results"][i]["id"], surprise["results"][i]["id"]);
  }
}

TEST_F(ServiceTest, Search) {
  const auto r = ok("GET", "/search", {}, {{"q", "toy"}, {"limit", "5"}});
  ASSERT_EQ(r["results"].size(), 2u);
  const auto expect = search_nodes(*graph_, "toy", 5);
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(r["results"][i]["id"], graph_->external_id(expect[i]));
  EXPECT_EQ(ok("GET", "/search", {}, {{"q", "zzz"}})["results"].size(), 0u);
  EXPECT_EQ(ok("GET", "/search", {}, {{"limit", "3"}})["results"].size(), 3u);
}

TEST_F(ServiceTest, RequestValidation) {
  EXPECT_EQ(call("POST", "/sessions/x/rank", "{not json").status, 400);
  EXPECT_EQ(call("POST", "/sessions/x/rank", R"({"k":3})").status, 400);
  EXPECT_EQ(call("POST", "/sessions/x/rank", R"({"focus":"m1","k":0})").status, 400);
  EXPECT_EQ(call("POST", "/sessions/x/rank", R"({"focus":"m1","mode":"best"})").status, 400);
  EXPECT_EQ(call("POST", "/sessions/x/rank", R"({"focus":"zz"})").status, 404);
  EXPECT_EQ(call("POST", "/sessions/x/rank", R"({"focus":"m1","exclude":["zz"]})").status, 400);
  EXPECT_EQ(call("POST", "/sessions/x/visits", R"({"node":"zz"})").status, 404);
  EXPECT_EQ(call("GET", "/sessions/x/rank").status, 405);
  EXPECT_EQ(call("GET", "/nowhere").status, 404);
  EXPECT_EQ(call("GET", "/search", {}, {{"limit", "-2"}}).status, 400);
}

TEST_F(ServiceTest, ScoresRoundToSixDigits) {
  const auto r = call("POST", "/sessions/r/rank", R"({"focus":"m1","k":10})");
  const auto doc = json::parse(r.body);
  for (const auto& row : doc["results"]) {
    const double s = row["surprise"];
    EXPECT_EQ(s, std::round(s * 1e6) / 1e6);
  }
}

TEST_F(ServiceTest, ResponsesAreDeterministic) {
  ExplorationService other(graph_, index_);
  const std::vector<HttpRequest> script{
      {"POST", "/sessions/d/visits", {}, R"({"node":"m1"})"},
      {"POST", "/sessions/d/rank", {}, R"({"focus":"m1","k":4})"},
      {"POST", "/sessions/d/visits", {}, R"({"node":"m2"})"},
      {"PUT", "/sessions/d/weights", {}, R"({"lambda":{"year":0.5}})"},
      {"POST", "/sessions/d/visits", {}, R"({"node":"m6"})"},
      {"POST", "/sessions/d/rank", {}, R"({"focus":"m2","k":4})"},
      {"GET", "/nodes/m2/neighborhood-summary", {{"session", "d"}}, {}},
      {"GET", "/sessions/d/profile", {}, {}},
  };
  for (const auto& req : script) {
    const auto a = service_->handle(req);
    const auto b = other.handle(req);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.body, b.body);
  }
}

TEST_F(ServiceTest, ConcurrentSessions) {
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([this, t] {
      const std::string sid = "/sessions/c" + std::to_string(t);
      for (int i = 0; i < 25; ++i) {
        service_->handle({"POST", sid + "/visits", {}, R"({"node":"m3"})"});
        service_->handle({"POST", sid + "/rank", {}, R"({"focus":"m1"})"});
      }
    });
  }
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t) {
    EXPECT_EQ(ok("GET", "/sessions/c" + std::to_string(t) + "/profile")["visit_count"], 25);
  }
}

TEST_F(ServiceTest, HttpServerRoundTrip) {
  HttpServer server(*service_);
  const int port = server.bind("127.0.0.1", 0);
  std::thread thread([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  httplib::Result res;
  for (int attempt = 0; attempt < 50 && !res; ++attempt) {
    res = client.Get("/graph/summary");
    if (!res) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["nodes"], 8);

  auto posted = client.Post("/sessions/h/rank", R"({"focus":"m1","k":2})", "application/json");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 200);
  EXPECT_EQ(posted->body, call("POST", "/sessions/h/rank", R"({"focus":"m1","k":2})").body);

  auto searched = client.Get("/search?q=toy&limit=1");
  ASSERT_TRUE(searched);
  EXPECT_EQ(json::parse(searched->body)["results"].size(), 1u);

  auto missing = client.Get("/nodes/zz");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  server.stop();
  thread.join();
}
