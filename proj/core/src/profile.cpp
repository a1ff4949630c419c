#include "explorank/profile.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "explorank/error.hpp"

namespace explorank {

void BlendWeights::validate() const {
  if (!std::isfinite(surprise) || !std::isfinite(interest) || surprise < 0.0 || interest < 0.0) {
    throw InvalidArgument("blend weights must be non-negative");
  }
  if (std::abs(surprise + interest - 1.0) > 1e-9) throw InvalidArgument("blend weights w_s + w_r must equal 1");
}

void validate_feature_weights(std::span<const double> lambda) {
  bool any_positive = false;
  for (double w : lambda) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("feature weights must be finite and non-negative");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw InvalidArgument("at least one feature weight must be positive");
}

SessionProfile::SessionProfile(std::string session_id, Binnings binnings, std::optional<std::size_t> window)
    : id_(std::move(session_id)), binnings_(std::move(binnings)), window_(window), lambda_(binnings_.size(), 1.0) {
  if (binnings_.empty()) throw InvalidArgument("a session needs at least one feature");
  for (std::size_t j = 0; j < binnings_.size(); ++j) {
    if (!binnings_[j] || binnings_[j]->feature() != j) throw InvalidArgument("session binnings out of order");
  }
  if (window_ && *window_ == 0) throw InvalidArgument("profile window must be positive");
}

std::span<const NodeId> SessionProfile::window_visits() const noexcept {
  std::span<const NodeId> all(visits_);
  if (window_ && all.size() > *window_) return all.last(*window_);
  return all;
}

void SessionProfile::record_visit(const AttributedGraph& g, NodeId node) {
  if (!g.contains(node)) throw NotFoundError("unknown node index " + std::to_string(node));
  visits_.push_back(node);
  rebuild(g);
}

void SessionProfile::rebuild(const AttributedGraph& g) {
  const auto recent = window_visits();
  std::vector<Histogram> hists;
  hists.reserve(binnings_.size());
  std::vector<double> values(recent.size());
  for (std::size_t j = 0; j < binnings_.size(); ++j) {
    for (std::size_t v = 0; v < recent.size(); ++v) values[v] = g.value(recent[v], j);
    hists.push_back(histogram_over(values, binnings_[j]));
  }
  histograms_ = std::move(hists);
}

void SessionProfile::set_feature_weight(std::size_t feature, double weight) {
  if (feature >= lambda_.size()) throw InvalidArgument("feature index out of range");
  auto next = lambda_;
  next[feature] = weight;
  validate_feature_weights(next);
  lambda_ = std::move(next);
}

void SessionProfile::set_lambda(std::vector<double> lambda) {
  if (lambda.size() != lambda_.size()) throw InvalidArgument("feature weight vector has the wrong length");
  validate_feature_weights(lambda);
  lambda_ = std::move(lambda);
}

void SessionProfile::set_blend(BlendWeights blend) {
  blend.validate();
  blend_ = blend;
}

ProfileSummary profile_summary(const SessionProfile& profile) {
  ProfileSummary s;
  s.visit_count = profile.visits().size();
  s.window = profile.window();
  s.histograms = profile.histograms();
  return s;
}

nlohmann::ordered_json session_snapshot(const SessionProfile& profile, const AttributedGraph& g) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["session_id"] = profile.id();
  auto visits = nlohmann::ordered_json::array();
  for (NodeId v : profile.visits()) visits.push_back(g.external_id(v));
  doc["visits"] = std::move(visits);
  doc["window"] = profile.window() ? nlohmann::ordered_json(*profile.window()) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json lambda = nlohmann::ordered_json::object();
  for (std::size_t j = 0; j < profile.lambda().size(); ++j) lambda[g.schema()[j].name] = profile.lambda()[j];
  doc["lambda"] = std::move(lambda);
  doc["blend"] = {{"w_s", profile.blend().surprise}, {"w_r", profile.blend().interest}};
  return doc;
}

SessionProfile restore_session(const nlohmann::ordered_json& snapshot, const AttributedGraph& g,
                               SessionProfile::Binnings binnings) {
  try {
    std::optional<std::size_t> window;
    if (snapshot.contains("window") && !snapshot["window"].is_null()) window = snapshot["window"].get<std::size_t>();
    SessionProfile profile(snapshot.at("session_id").get<std::string>(), std::move(binnings), window);
    std::vector<double> lambda = profile.lambda();
    for (const auto& [name, weight] : snapshot.at("lambda").items()) {
      const auto j = g.schema().find(name);
      if (!j) throw InvalidArgument("snapshot weights unknown feature '" + name + "'");
      lambda[*j] = weight.get<double>();
    }
    profile.set_lambda(std::move(lambda));
    const auto& blend = snapshot.at("blend");
    profile.set_blend({blend.at("w_s").get<double>(), blend.at("w_r").get<double>()});
    for (const auto& v : snapshot.at("visits")) profile.record_visit(g, g.require(v.get<std::string>()));
    return profile;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed session snapshot: ") + e.what());
  }
}

}  // namespace explorank
