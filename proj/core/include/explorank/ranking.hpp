#pragma once

#include <cstddef>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "explorank/graph.hpp"
#include "explorank/profile.hpp"
#include "explorank/surprise_index.hpp"

namespace explorank {

enum class RankMode { surprise, interest, combined };

std::string_view to_string(RankMode mode) noexcept;
RankMode parse_rank_mode(std::string_view text);

struct RankConfig {
  /// Focus nodes with at least this many neighbors are ranked over their
  /// `candidate_cap` highest-degree neighbors only. 0 disables the cap.
  std::size_t candidate_cap = 1000;
  /// Visits needed before interest scores are used.
  std::size_t cold_start_visits = 3;
};

struct RankRequest {
  NodeId focus = 0;
  std::size_t k = 10;
  RankMode mode = RankMode::combined;
  /// Nodes the client already displays; never returned.
  std::vector<NodeId> exclude;
};

struct ScoredNeighbor {
  NodeId node = 0;
  /// sum_j lambda_j s_i^(j), in bits.
  double surprise = 0.0;
  /// sum_j lambda_j r_i^(j); absent when no profile was used.
  std::optional<double> interest;
  /// sum_j lambda_j t_i^(j) for combined rankings; equals `surprise` or `interest`
  /// for the single-criterion modes.
  double score = 0.0;
  std::vector<double> surprise_by_feature;
  std::vector<double> interest_by_feature;  // empty when `interest` is absent
  std::vector<double> score_by_feature;     // empty unless combined
};

struct RankResult {
  RankMode requested = RankMode::combined;
  RankMode used = RankMode::combined;
  bool cold_start = false;
  std::size_t candidates_scored = 0;
  std::vector<ScoredNeighbor> neighbors;
};

/// Per-feature blended score w_s * s + w_r * (1 - r).
inline double blended_score(double surprise, double interest, const BlendWeights& w) noexcept {
  return w.surprise * surprise + w.interest * (1.0 - interest);
}

struct InterestScores {
  /// Row-major: candidate c, feature j at c * features + j.
  std::vector<double> by_feature;
  std::vector<double> aggregate;
};

/// Bounded memo of local distributions keyed by (node, feature), used when the
/// index was built without them. Least recently used entries are evicted first.
/// Thread-safe.
class LocalHistogramCache {
 public:
  explicit LocalHistogramCache(std::size_t capacity) : capacity_(capacity) {}

  /// Copies the local distribution into `out`, computing it on a miss.
  void fetch(const AttributedGraph& g, const Binning& binning, NodeId node, std::vector<double>& out);

  std::size_t size() const;
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  using Key = std::uint64_t;
  struct Entry {
    Key key;
    std::vector<double> mass;
  };
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<Entry> order_;
  std::unordered_map<Key, std::list<Entry>::iterator> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Ranks the neighbors of a focus node by surprise, interest, or their blend.
/// Holds references only; the graph, index and optional cache must outlive it.
class Ranker {
 public:
  Ranker(const AttributedGraph& g, const SurpriseIndex& index, RankConfig config = {},
         LocalHistogramCache* cache = nullptr);

  const RankConfig& config() const noexcept { return config_; }

  /// Neighbors of `focus` minus `exclude`; when the remainder reaches the cap, the
  /// `candidate_cap` highest-degree ones (ties by id). Sorted by id.
  std::vector<NodeId> candidates(NodeId focus, std::span<const NodeId> exclude = {}) const;

  /// Per-feature and weighted D_JS(L_i || U) for each candidate. Requires a
  /// profile with at least one visit (ConflictError otherwise).
  InterestScores interest_scores(std::span<const NodeId> candidates, const SessionProfile& profile) const;

  /// Full ranking for a request. Combined mode on a profile with fewer than
  /// `cold_start_visits` visits falls back to cold_start_rank; interest mode on
  /// such a profile throws ConflictError.
  RankResult rank_neighbors(const SessionProfile& profile, const RankRequest& request) const;

  /// Surprise descending, then degree descending, then id.
  std::vector<ScoredNeighbor> cold_start_rank(std::span<const double> lambda, NodeId focus, std::size_t k,
                                              std::span<const NodeId> exclude = {}) const;
  /// Surprise descending, then id.
  std::vector<ScoredNeighbor> top_surprising(std::span<const double> lambda, NodeId focus, std::size_t k,
                                             std::span<const NodeId> exclude = {}) const;
  /// Interest divergence ascending, then id. Requires a non-empty profile.
  std::vector<ScoredNeighbor> top_interesting(const SessionProfile& profile, NodeId focus, std::size_t k,
                                              std::span<const NodeId> exclude = {}) const;

 private:
  void require_focus(NodeId focus) const;
  ScoredNeighbor surprise_entry(NodeId node, std::span<const double> lambda) const;
  std::vector<ScoredNeighbor> by_surprise(std::span<const double> lambda, std::span<const NodeId> candidates,
                                          std::size_t k, bool degree_tiebreak) const;
  std::vector<ScoredNeighbor> by_interest(const SessionProfile& profile, std::span<const NodeId> candidates,
                                          std::size_t k) const;
  std::vector<ScoredNeighbor> by_blend(const SessionProfile& profile, std::span<const NodeId> candidates,
                                       std::size_t k) const;
  std::span<const double> local_mass(NodeId node, std::size_t j, std::vector<double>& scratch) const;

  const AttributedGraph& graph_;
  const SurpriseIndex& index_;
  RankConfig config_;
  LocalHistogramCache* cache_;
  mutable std::optional<LocalHistogramCache> own_cache_;
};

}  // namespace explorank
