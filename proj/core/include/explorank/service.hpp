#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "explorank/graph.hpp"
#include "explorank/profile.hpp"
#include "explorank/ranking.hpp"
#include "explorank/surprise_index.hpp"

namespace explorank {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

struct ServiceOptions {
  RankConfig rank;
  /// Profile window for new sessions; unset means the whole session.
  std::optional<std::size_t> window;
  std::size_t default_k = 10;
  std::size_t default_search_limit = 20;
};

/// Score formatting for response bodies: rounded to 6 fractional digits unless
/// `full` is set.
struct ScoreFormat {
  bool full = false;
  double operator()(double value) const;
};

/// Rank response body shared by the HTTP endpoint and `explorank rank --json`.
nlohmann::ordered_json rank_result_json(const AttributedGraph& g, const RankResult& result, std::string_view session,
                                        NodeId focus, ScoreFormat fmt);

nlohmann::ordered_json profile_summary_json(const AttributedGraph& g, const SessionProfile& profile,
                                            std::size_t cold_start_visits, ScoreFormat fmt);

/// Request dispatcher for the exploration API. The graph and index are shared
/// read-only; sessions are created on first use and each is guarded by its own
/// mutex, so requests for different sessions never wait on each other.
///
///   GET  /graph/summary
///   GET  /nodes/{id}
///   GET  /nodes/{id}/neighborhood-summary?session=&mode=&k=&exclude=a,b
///   GET  /search?q=&limit=
///   POST /sessions/{sid}/rank      {focus, k, mode, exclude}
///   POST /sessions/{sid}/visits    {node}
///   PUT  /sessions/{sid}/weights   {lambda:{feature:w}, w_s, w_r}
///   GET  /sessions/{sid}/profile
///
/// Every endpoint accepts `precision=full`. Errors use {error:{code, message}}.
class ExplorationService {
 public:
  ExplorationService(std::shared_ptr<const AttributedGraph> graph, std::shared_ptr<const SurpriseIndex> index,
                     ServiceOptions options = {});

  HttpResponse handle(const HttpRequest& request);

  const AttributedGraph& graph() const noexcept { return *graph_; }
  const SurpriseIndex& index() const noexcept { return *index_; }

 private:
  struct Session {
    std::mutex mutex;
    SessionProfile profile;
    explicit Session(SessionProfile p) : profile(std::move(p)) {}
  };

  /// New sessions start from the index's build-time feature weights.
  SessionProfile fresh_profile(const std::string& id) const;
  std::shared_ptr<Session> session(const std::string& id, bool create);
  SessionProfile snapshot(const std::string& id, bool create);

  nlohmann::ordered_json graph_summary() const;
  nlohmann::ordered_json node_detail(NodeId node, ScoreFormat fmt) const;
  nlohmann::ordered_json neighborhood_summary(NodeId node, const HttpRequest& request, ScoreFormat fmt);
  nlohmann::ordered_json rank(const std::string& sid, const std::string& body, ScoreFormat fmt);
  nlohmann::ordered_json visit(const std::string& sid, const std::string& body, ScoreFormat fmt);
  nlohmann::ordered_json weights(const std::string& sid, const std::string& body);
  nlohmann::ordered_json search(const HttpRequest& request, ScoreFormat fmt) const;

  std::shared_ptr<const AttributedGraph> graph_;
  std::shared_ptr<const SurpriseIndex> index_;
  ServiceOptions options_;
  Ranker ranker_;
  std::mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Blocking HTTP/1.1 server around an ExplorationService.
class HttpServer {
 public:
  explicit HttpServer(ExplorationService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace explorank
