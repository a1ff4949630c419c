#include "explorank/service.hpp"

#include <cmath>
#include <sstream>

#include <httplib.h>

#include "explorank/error.hpp"
#include "explorank/search.hpp"

namespace explorank {

using ojson = nlohmann::ordered_json;

double ScoreFormat::operator()(double value) const {
  if (full) return value;
  const double rounded = std::round(value * 1e6) / 1e6;
  return rounded == 0.0 ? 0.0 : rounded;
}

namespace {

struct HttpError : Error {
  HttpError(int status, std::string code, const std::string& message)
      : Error(message), status(status), code(std::move(code)) {}
  int status;
  std::string code;
};

HttpError bad_request(const std::string& message) { return {400, "invalid_request", message}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ojson parse_body(const std::string& body) {
  if (body.empty()) return ojson::object();
  try {
    auto doc = ojson::parse(body);
    if (!doc.is_object()) throw bad_request("request body must be a JSON object");
    return doc;
  } catch (const ojson::parse_error& e) {
    throw bad_request(std::string("malformed JSON body: ") + e.what());
  }
}

std::size_t positive_count(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size() || v < 1) throw bad_request(std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw bad_request(std::string(what) + " must be a positive integer");
  }
}

std::size_t positive_count(const ojson& value, const char* what) {
  if (!value.is_number_integer() || value.get<long long>() < 1) {
    throw bad_request(std::string(what) + " must be a positive integer");
  }
  return value.get<std::size_t>();
}

ojson histogram_bins(const Binning& b) {
  ojson out;
  out["kind"] = to_string(b.kind());
  out["bins"] = b.bin_count();
  if (b.kind() == FeatureKind::numerical) {
    out["edges"] = b.edges();
  } else {
    out["categories"] = b.categories();
  }
  return out;
}

ojson masses(std::span<const double> mass, ScoreFormat fmt) {
  auto out = ojson::array();
  for (double m : mass) out.push_back(fmt(m));
  return out;
}

ojson optional_score(const std::vector<double>& v, std::size_t j, ScoreFormat fmt) {
  return j < v.size() ? ojson(fmt(v[j])) : ojson(nullptr);
}

}  // namespace

ojson rank_result_json(const AttributedGraph& g, const RankResult& result, std::string_view session, NodeId focus,
                       ScoreFormat fmt) {
  ojson out;
  out["session"] = session;
  out["focus"] = g.external_id(focus);
  out["requested_mode"] = to_string(result.requested);
  out["mode"] = to_string(result.used);
  out["cold_start"] = result.cold_start;
  out["candidates"] = result.candidates_scored;
  auto rows = ojson::array();
  std::size_t rank = 0;
  for (const auto& n : result.neighbors) {
    ojson row;
    row["rank"] = ++rank;
    row["id"] = g.external_id(n.node);
    row["label"] = g.label(n.node);
    row["degree"] = g.degree(n.node);
    row["surprise"] = fmt(n.surprise);
    row["interest"] = n.interest ? ojson(fmt(*n.interest)) : ojson(nullptr);
    row["score"] = fmt(n.score);
    auto features = ojson::array();
    for (std::size_t j = 0; j < n.surprise_by_feature.size(); ++j) {
      ojson f;
      f["name"] = g.schema()[j].name;
      f["surprise"] = fmt(n.surprise_by_feature[j]);
      f["interest"] = optional_score(n.interest_by_feature, j, fmt);
      f["score"] = optional_score(n.score_by_feature, j, fmt);
      features.push_back(std::move(f));
    }
    row["features"] = std::move(features);
    rows.push_back(std::move(row));
  }
  out["results"] = std::move(rows);
  return out;
}

ojson profile_summary_json(const AttributedGraph& g, const SessionProfile& profile, std::size_t cold_start_visits,
                           ScoreFormat fmt) {
  const auto summary = profile_summary(profile);
  ojson out;
  out["session"] = profile.id();
  out["visit_count"] = summary.visit_count;
  out["window"] = summary.window ? ojson(*summary.window) : ojson(nullptr);
  out["cold_start"] = summary.visit_count < cold_start_visits;
  auto visits = ojson::array();
  for (NodeId v : profile.visits()) visits.push_back(g.external_id(v));
  out["visits"] = std::move(visits);
  ojson lambda = ojson::object();
  for (std::size_t j = 0; j < profile.lambda().size(); ++j) lambda[g.schema()[j].name] = profile.lambda()[j];
  out["lambda"] = std::move(lambda);
  out["blend"] = {{"w_s", profile.blend().surprise}, {"w_r", profile.blend().interest}};
  if (summary.histograms.empty()) {
    out["profile"] = "empty";
  } else {
    auto features = ojson::array();
    for (std::size_t j = 0; j < summary.histograms.size(); ++j) {
      features.push_back({{"name", g.schema()[j].name}, {"mass", masses(summary.histograms[j].mass(), fmt)}});
    }
    out["profile"] = std::move(features);
  }
  return out;
}

// ---------------------------------------------------------------------------

ExplorationService::ExplorationService(std::shared_ptr<const AttributedGraph> graph,
                                       std::shared_ptr<const SurpriseIndex> index, ServiceOptions options)
    : graph_(std::move(graph)), index_(std::move(index)), options_(options), ranker_(*graph_, *index_, options.rank) {}

SessionProfile ExplorationService::fresh_profile(const std::string& id) const {
  SessionProfile p(id, index_->binnings(), options_.window);
  p.set_lambda(index_->lambda());
  return p;
}

std::shared_ptr<ExplorationService::Session> ExplorationService::session(const std::string& id, bool create) {
  std::lock_guard lock(sessions_mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  if (!create) return nullptr;
  auto s = std::make_shared<Session>(fresh_profile(id));
  sessions_.emplace(id, s);
  return s;
}

SessionProfile ExplorationService::snapshot(const std::string& id, bool create) {
  auto s = session(id, create);
  if (!s) return fresh_profile(id);
  std::lock_guard lock(s->mutex);
  return s->profile;
}

ojson ExplorationService::graph_summary() const {
  ojson out;
  out["nodes"] = graph_->node_count();
  out["edges"] = graph_->edge_count();
  auto features = ojson::array();
  for (std::size_t j = 0; j < graph_->feature_count(); ++j) {
    ojson f;
    f["name"] = graph_->schema()[j].name;
    f.update(histogram_bins(*index_->binnings()[j]));
    f["weight"] = index_->lambda()[j];
    features.push_back(std::move(f));
  }
  out["features"] = std::move(features);
  return out;
}

ojson ExplorationService::node_detail(NodeId node, ScoreFormat fmt) const {
  ojson out;
  out["id"] = graph_->external_id(node);
  out["label"] = graph_->label(node);
  out["degree"] = graph_->degree(node);
  ojson values = ojson::object();
  ojson surprise = ojson::object();
  for (std::size_t j = 0; j < graph_->feature_count(); ++j) {
    const auto& name = graph_->schema()[j].name;
    if (graph_->schema()[j].kind == FeatureKind::numerical) {
      values[name] = graph_->value(node, j);
    } else {
      values[name] = graph_->display_value(node, j);
    }
    surprise[name] = fmt(index_->feature_surprise(node, j));
  }
  out["values"] = std::move(values);
  out["surprise"] = fmt(index_->surprise(node));
  out["surprise_by_feature"] = std::move(surprise);
  return out;
}

ojson ExplorationService::neighborhood_summary(NodeId node, const HttpRequest& request, ScoreFormat fmt) {
  const auto q = [&](const char* key) -> std::optional<std::string> {
    auto it = request.query.find(key);
    return it == request.query.end() ? std::nullopt : std::optional(it->second);
  };
  RankRequest rr;
  rr.focus = node;
  rr.k = q("k") ? positive_count(*q("k"), "k") : options_.default_k;
  rr.mode = q("mode") ? parse_rank_mode(*q("mode")) : RankMode::combined;
  if (auto ex = q("exclude")) {
    for (const auto& id : split_list(*ex)) rr.exclude.push_back(graph_->require(id));
  }
  const auto sid = q("session").value_or("");
  const auto profile = snapshot(sid, false);
  const auto result = ranker_.rank_neighbors(profile, rr);

  ojson out;
  out["id"] = graph_->external_id(node);
  out["mode"] = to_string(result.used);
  out["cold_start"] = result.cold_start;
  out["hidden"] = result.candidates_scored;
  out["top"] = rank_result_json(*graph_, result, sid, node, fmt)["results"];
  auto features = ojson::array();
  for (std::size_t j = 0; j < graph_->feature_count(); ++j) {
    const auto& binning = index_->binnings()[j];
    ojson f;
    f["name"] = graph_->schema()[j].name;
    f.update(histogram_bins(*binning));
    f["local"] = masses(local_distribution(*graph_, node, j, binning).mass(), fmt);
    f["global"] = masses(index_->global(j).mass(), fmt);
    features.push_back(std::move(f));
  }
  out["features"] = std::move(features);
  return out;
}

ojson ExplorationService::rank(const std::string& sid, const std::string& body, ScoreFormat fmt) {
  const auto doc = parse_body(body);
  if (!doc.contains("focus") || !doc["focus"].is_string()) throw bad_request("'focus' must be a node id string");
  RankRequest rr;
  rr.focus = graph_->require(doc["focus"].get<std::string>());
  rr.k = doc.contains("k") ? positive_count(doc["k"], "k") : options_.default_k;
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw bad_request("'mode' must be a string");
    rr.mode = parse_rank_mode(doc["mode"].get<std::string>());
  }
  if (doc.contains("exclude")) {
    if (!doc["exclude"].is_array()) throw bad_request("'exclude' must be an array of node ids");
    for (const auto& id : doc["exclude"]) {
      if (!id.is_string()) throw bad_request("'exclude' must be an array of node ids");
      const auto node = graph_->find(id.get<std::string>());
      if (!node) throw bad_request("'exclude' names unknown node '" + id.get<std::string>() + "'");
      rr.exclude.push_back(*node);
    }
  }
  const auto profile = snapshot(sid, true);
  return rank_result_json(*graph_, ranker_.rank_neighbors(profile, rr), sid, rr.focus, fmt);
}

ojson ExplorationService::visit(const std::string& sid, const std::string& body, ScoreFormat fmt) {
  const auto doc = parse_body(body);
  if (!doc.contains("node") || !doc["node"].is_string()) throw bad_request("'node' must be a node id string");
  const NodeId node = graph_->require(doc["node"].get<std::string>());
  auto s = session(sid, true);
  std::lock_guard lock(s->mutex);
  s->profile.record_visit(*graph_, node);
  return profile_summary_json(*graph_, s->profile, options_.rank.cold_start_visits, fmt);
}

ojson ExplorationService::weights(const std::string& sid, const std::string& body) {
  const auto doc = parse_body(body);
  auto s = session(sid, true);
  std::lock_guard lock(s->mutex);
  auto lambda = s->profile.lambda();
  auto blend = s->profile.blend();
  if (doc.contains("lambda")) {
    if (!doc["lambda"].is_object()) throw bad_request("'lambda' must map feature names to weights");
    for (const auto& [name, w] : doc["lambda"].items()) {
      const auto j = graph_->schema().find(name);
      if (!j) throw bad_request("unknown feature '" + name + "'");
      if (!w.is_number()) throw bad_request("weight of '" + name + "' must be a number");
      lambda[*j] = w.get<double>();
    }
  }
  for (const auto& [key, slot] : {std::pair{"w_s", &blend.surprise}, std::pair{"w_r", &blend.interest}}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_number()) throw bad_request(std::string("'") + key + "' must be a number");
    *slot = doc[key].get<double>();
  }
  validate_feature_weights(lambda);
  blend.validate();
  s->profile.set_lambda(lambda);
  s->profile.set_blend(blend);

  ojson out;
  out["ok"] = true;
  out["session"] = sid;
  ojson lam = ojson::object();
  for (std::size_t j = 0; j < lambda.size(); ++j) lam[graph_->schema()[j].name] = lambda[j];
  out["lambda"] = std::move(lam);
  out["blend"] = {{"w_s", blend.surprise}, {"w_r", blend.interest}};
  return out;
}

ojson ExplorationService::search(const HttpRequest& request, ScoreFormat fmt) const {
  const auto qit = request.query.find("q");
  const std::string query = qit == request.query.end() ? "" : qit->second;
  const auto lit = request.query.find("limit");
  const auto limit = lit == request.query.end() ? options_.default_search_limit : positive_count(lit->second, "limit");
  ojson out;
  out["query"] = query;
  auto rows = ojson::array();
  for (NodeId n : search_nodes(*graph_, query, limit)) {
    rows.push_back({{"id", graph_->external_id(n)},
                    {"label", graph_->label(n)},
                    {"degree", graph_->degree(n)},
                    {"surprise", fmt(index_->surprise(n))}});
  }
  out["results"] = std::move(rows);
  return out;
}

HttpResponse ExplorationService::handle(const HttpRequest& request) {
  const auto envelope = [](int status, std::string_view code, std::string_view message) {
    ojson err;
    err["error"] = {{"code", code}, {"message", message}};
    return HttpResponse{status, err.dump()};
  };
  try {
    const auto it = request.query.find("precision");
    const ScoreFormat fmt{it != request.query.end() && it->second == "full"};
    const auto parts = split_path(request.path);
    const auto& m = request.method;
    const auto method_guard = [&](std::string_view allowed) {
      if (m != allowed) throw HttpError(405, "method_not_allowed", "use " + std::string(allowed) + " for " + request.path);
    };

    ojson body;
    if (parts.size() == 2 && parts[0] == "graph" && parts[1] == "summary") {
      method_guard("GET");
      body = graph_summary();
    } else if (parts.size() == 2 && parts[0] == "nodes") {
      method_guard("GET");
      body = node_detail(graph_->require(parts[1]), fmt);
    } else if (parts.size() == 3 && parts[0] == "nodes" && parts[2] == "neighborhood-summary") {
      method_guard("GET");
      body = neighborhood_summary(graph_->require(parts[1]), request, fmt);
    } else if (parts.size() == 1 && parts[0] == "search") {
      method_guard("GET");
      body = search(request, fmt);
    } else if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "rank") {
      method_guard("POST");
      body = rank(parts[1], request.body, fmt);
    } else if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "visits") {
      method_guard("POST");
      body = visit(parts[1], request.body, fmt);
    } else if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "weights") {
      method_guard("PUT");
      body = weights(parts[1], request.body);
    } else if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "profile") {
      method_guard("GET");
      body = profile_summary_json(*graph_, snapshot(parts[1], false), options_.rank.cold_start_visits, fmt);
    } else {
      return envelope(404, "not_found", "no route for " + request.method + " " + request.path);
    }
    return {200, body.dump()};
  } catch (const HttpError& e) {
    return envelope(e.status, e.code, e.what());
  } catch (const NotFoundError& e) {
    return envelope(404, "not_found", e.what());
  } catch (const ConflictError& e) {
    return envelope(409, "conflict", e.what());
  } catch (const InvalidArgument& e) {
    return envelope(400, "invalid_request", e.what());
  } catch (const std::exception& e) {
    return envelope(500, "internal", e.what());
  }
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  explicit Impl(ExplorationService& s) : service(s) {}
  ExplorationService& service;
  httplib::Server server;
};

HttpServer::HttpServer(ExplorationService& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    auto out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(std::move(out.body), "application/json; charset=utf-8");
  };
  const std::string any = R"(/.*)";
  impl_->server.Get(any, handler);
  impl_->server.Post(any, handler);
  impl_->server.Put(any, handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace explorank
