#include "explorank/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "explorank/divergence.hpp"
#include "explorank/error.hpp"

namespace explorank {

std::string_view to_string(RankMode mode) noexcept {
  switch (mode) {
    case RankMode::surprise:
      return "surprise";
    case RankMode::interest:
      return "interest";
    case RankMode::combined:
      return "combined";
  }
  return "combined";
}

RankMode parse_rank_mode(std::string_view text) {
  if (text == "surprise") return RankMode::surprise;
  if (text == "interest") return RankMode::interest;
  if (text == "combined") return RankMode::combined;
  throw InvalidArgument("unknown ranking mode '" + std::string(text) + "' (expected surprise, interest or combined)");
}

// ---------------------------------------------------------------------------

void LocalHistogramCache::fetch(const AttributedGraph& g, const Binning& binning, NodeId node,
                                std::vector<double>& out) {
  const Key key = (static_cast<Key>(node) << 16) | static_cast<Key>(binning.feature());
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      out = it->second->mass;
      ++hits_;
      return;
    }
    ++misses_;
  }
  out.resize(binning.bin_count());
  local_mass_into(g, node, binning, out);
  if (capacity_ == 0) return;
  std::lock_guard lock(mutex_);
  if (entries_.count(key)) return;
  order_.push_front({key, out});
  entries_.emplace(key, order_.begin());
  while (entries_.size() > capacity_) {
    entries_.erase(order_.back().key);
    order_.pop_back();
  }
}

std::size_t LocalHistogramCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}
std::size_t LocalHistogramCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}
std::size_t LocalHistogramCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

// ---------------------------------------------------------------------------

namespace {

/// Indices of the best `k` entries under `before`, in order.
template <typename Before>
std::vector<std::size_t> select_top(std::size_t count, std::size_t k, Before before) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  const auto keep = std::min(k, count);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), before);
  order.resize(keep);
  return order;
}

double weighted(std::span<const double> lambda, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) total += lambda[j] * values[j];
  return total;
}

}  // namespace

Ranker::Ranker(const AttributedGraph& g, const SurpriseIndex& index, RankConfig config, LocalHistogramCache* cache)
    : graph_(g), index_(index), config_(config), cache_(cache) {
  if (index.node_count() != g.node_count() || index.feature_count() != g.feature_count()) {
    throw IndexMismatch("surprise index does not match the graph's shape");
  }
  if (!index_.has_local() && cache_ == nullptr) {
    own_cache_.emplace(std::size_t{1} << 16);
    cache_ = &*own_cache_;
  }
}

void Ranker::require_focus(NodeId focus) const {
  if (!graph_.contains(focus)) throw NotFoundError("unknown focus node index " + std::to_string(focus));
}

std::vector<NodeId> Ranker::candidates(NodeId focus, std::span<const NodeId> exclude) const {
  require_focus(focus);
  const auto nbrs = graph_.neighbors(focus);
  std::vector<NodeId> out;
  if (exclude.empty()) {
    out.assign(nbrs.begin(), nbrs.end());
  } else {
    std::vector<NodeId> skip(exclude.begin(), exclude.end());
    std::sort(skip.begin(), skip.end());
    out.reserve(nbrs.size());
    std::set_difference(nbrs.begin(), nbrs.end(), skip.begin(), skip.end(), std::back_inserter(out));
  }
  const auto cap = config_.candidate_cap;
  if (cap > 0 && out.size() >= cap) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(cap), out.end(), [&](NodeId a, NodeId b) {
      const auto da = graph_.degree(a);
      const auto db = graph_.degree(b);
      return da != db ? da > db : a < b;
    });
    out.resize(cap);
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::span<const double> Ranker::local_mass(NodeId node, std::size_t j, std::vector<double>& scratch) const {
  if (index_.has_local()) return index_.local_mass(node, j);
  cache_->fetch(graph_, *index_.binnings()[j], node, scratch);
  return scratch;
}

InterestScores Ranker::interest_scores(std::span<const NodeId> candidates, const SessionProfile& profile) const {
  if (profile.empty()) throw ConflictError("interest scores need at least one visited node");
  if (profile.feature_count() != index_.feature_count()) throw InvalidArgument("profile does not match the index");
  const std::size_t f = index_.feature_count();
  const auto& lambda = profile.lambda();
  const auto& profile_hists = profile.histograms();
  InterestScores out;
  out.by_feature.resize(candidates.size() * f);
  out.aggregate.resize(candidates.size());
  std::vector<double> scratch;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double total = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      const double r = js_divergence(local_mass(candidates[c], j, scratch), profile_hists[j].mass());
      out.by_feature[c * f + j] = r;
      total += lambda[j] * r;
    }
    out.aggregate[c] = total;
  }
  return out;
}

ScoredNeighbor Ranker::surprise_entry(NodeId node, std::span<const double> lambda) const {
  ScoredNeighbor e;
  e.node = node;
  const auto s = index_.feature_surprises(node);
  e.surprise_by_feature.assign(s.begin(), s.end());
  e.surprise = weighted(lambda, s);
  e.score = e.surprise;
  return e;
}

std::vector<ScoredNeighbor> Ranker::by_surprise(std::span<const double> lambda, std::span<const NodeId> cands,
                                                std::size_t k, bool degree_tiebreak) const {
  std::vector<double> s(cands.size());
  for (std::size_t c = 0; c < cands.size(); ++c) s[c] = weighted(lambda, index_.feature_surprises(cands[c]));
  const auto top = select_top(cands.size(), k, [&](std::size_t a, std::size_t b) {
    if (s[a] != s[b]) return s[a] > s[b];
    if (degree_tiebreak) {
      const auto da = graph_.degree(cands[a]);
      const auto db = graph_.degree(cands[b]);
      if (da != db) return da > db;
    }
    return cands[a] < cands[b];
  });
  std::vector<ScoredNeighbor> out;
  out.reserve(top.size());
  for (auto c : top) out.push_back(surprise_entry(cands[c], lambda));
  return out;
}

std::vector<ScoredNeighbor> Ranker::by_interest(const SessionProfile& profile, std::span<const NodeId> cands,
                                                std::size_t k) const {
  const auto scores = interest_scores(cands, profile);
  const std::size_t f = index_.feature_count();
  const auto& r = scores.aggregate;
  const auto top = select_top(cands.size(), k, [&](std::size_t a, std::size_t b) {
    return r[a] != r[b] ? r[a] < r[b] : cands[a] < cands[b];
  });
  std::vector<ScoredNeighbor> out;
  out.reserve(top.size());
  for (auto c : top) {
    auto e = surprise_entry(cands[c], profile.lambda());
    e.interest = r[c];
    e.interest_by_feature.assign(scores.by_feature.begin() + static_cast<std::ptrdiff_t>(c * f),
                                 scores.by_feature.begin() + static_cast<std::ptrdiff_t>((c + 1) * f));
    e.score = r[c];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ScoredNeighbor> Ranker::by_blend(const SessionProfile& profile, std::span<const NodeId> cands,
                                             std::size_t k) const {
  if (profile.empty()) throw ConflictError("combined ranking needs at least one visited node");
  const std::size_t f = index_.feature_count();
  const auto& lambda = profile.lambda();
  const auto& blend = profile.blend();
  const auto& profile_hists = profile.histograms();

  std::vector<double> r_by(cands.size() * f);
  std::vector<double> t_by(cands.size() * f);
  std::vector<double> total(cands.size());
  std::vector<double> scratch;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const auto s = index_.feature_surprises(cands[c]);
    double sum = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      const double r = js_divergence(local_mass(cands[c], j, scratch), profile_hists[j].mass());
      const double t = blended_score(s[j], r, blend);
      r_by[c * f + j] = r;
      t_by[c * f + j] = t;
      sum += lambda[j] * t;
    }
    total[c] = sum;
  }

  const auto top = select_top(cands.size(), k, [&](std::size_t a, std::size_t b) {
    return total[a] != total[b] ? total[a] > total[b] : cands[a] < cands[b];
  });
  std::vector<ScoredNeighbor> out;
  out.reserve(top.size());
  for (auto c : top) {
    const auto row = [&](const std::vector<double>& v) {
      return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(c * f),
                                 v.begin() + static_cast<std::ptrdiff_t>((c + 1) * f));
    };
    auto e = surprise_entry(cands[c], lambda);
    e.interest_by_feature = row(r_by);
    e.score_by_feature = row(t_by);
    e.interest = weighted(lambda, e.interest_by_feature);
    e.score = total[c];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ScoredNeighbor> Ranker::cold_start_rank(std::span<const double> lambda, NodeId focus, std::size_t k,
                                                    std::span<const NodeId> exclude) const {
  return by_surprise(lambda, candidates(focus, exclude), k, true);
}

std::vector<ScoredNeighbor> Ranker::top_surprising(std::span<const double> lambda, NodeId focus, std::size_t k,
                                                   std::span<const NodeId> exclude) const {
  return by_surprise(lambda, candidates(focus, exclude), k, false);
}

std::vector<ScoredNeighbor> Ranker::top_interesting(const SessionProfile& profile, NodeId focus, std::size_t k,
                                                    std::span<const NodeId> exclude) const {
  return by_interest(profile, candidates(focus, exclude), k);
}

RankResult Ranker::rank_neighbors(const SessionProfile& profile, const RankRequest& request) const {
  require_focus(request.focus);
  if (request.k == 0) throw InvalidArgument("k must be at least 1");
  if (profile.feature_count() != index_.feature_count()) throw InvalidArgument("profile does not match the index");

  RankResult result;
  result.requested = request.mode;
  const bool warm = !profile.empty() && profile.visits().size() >= config_.cold_start_visits;
  if (request.mode == RankMode::interest && !warm) {
    throw ConflictError("interest ranking needs " + std::to_string(config_.cold_start_visits) +
                        " visited nodes, session has " + std::to_string(profile.visits().size()));
  }
  const auto cands = candidates(request.focus, request.exclude);
  result.candidates_scored = cands.size();
  const auto& lambda = profile.lambda();

  switch (request.mode) {
    case RankMode::surprise:
      result.used = RankMode::surprise;
      result.neighbors = by_surprise(lambda, cands, request.k, false);
      break;
    case RankMode::interest:
      result.used = RankMode::interest;
      result.neighbors = by_interest(profile, cands, request.k);
      break;
    case RankMode::combined:
      if (warm) {
        result.used = RankMode::combined;
        result.neighbors = by_blend(profile, cands, request.k);
      } else {
        result.used = RankMode::surprise;
        result.cold_start = true;
        result.neighbors = by_surprise(lambda, cands, request.k, true);
      }
      break;
  }
  return result;
}

}  // namespace explorank
