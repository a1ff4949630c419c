#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "explorank/binning.hpp"
#include "explorank/graph.hpp"
#include "explorank/histogram.hpp"

namespace explorank {

/// Mix between surprise and interest in the combined ranking. Both non-negative,
/// summing to one.
struct BlendWeights {
  double surprise = 0.5;
  double interest = 0.5;

  /// Throws InvalidArgument unless both are >= 0 and they sum to 1 within 1e-9.
  void validate() const;
};

/// Throws InvalidArgument on a negative or non-finite weight, or when every weight is zero.
void validate_feature_weights(std::span<const double> lambda);

/// Exploration state of one user session: the visit sequence, the profile
/// distributions built from the visited nodes' own feature values, and the
/// user-adjustable weights. Single writer; copy it to take a snapshot.
class SessionProfile {
 public:
  using Binnings = std::vector<std::shared_ptr<const Binning>>;

  SessionProfile(std::string session_id, Binnings binnings, std::optional<std::size_t> window = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  std::size_t feature_count() const noexcept { return binnings_.size(); }

  /// Every recorded visit, oldest first. Duplicates are kept.
  const std::vector<NodeId>& visits() const noexcept { return visits_; }
  bool empty() const noexcept { return visits_.empty(); }
  std::optional<std::size_t> window() const noexcept { return window_; }
  /// Visits that currently shape the profile: the last `window` ones, or all.
  std::span<const NodeId> window_visits() const noexcept;

  /// Throws NotFoundError when the node is not in `g`.
  void record_visit(const AttributedGraph& g, NodeId node);

  const std::vector<double>& lambda() const noexcept { return lambda_; }
  void set_feature_weight(std::size_t feature, double weight);
  void set_lambda(std::vector<double> lambda);

  const BlendWeights& blend() const noexcept { return blend_; }
  void set_blend(BlendWeights blend);

  /// Profile distribution per feature; empty until the first visit.
  const std::vector<Histogram>& histograms() const noexcept { return histograms_; }

 private:
  void rebuild(const AttributedGraph& g);

  std::string id_;
  Binnings binnings_;
  std::optional<std::size_t> window_;
  std::vector<NodeId> visits_;
  std::vector<double> lambda_;
  BlendWeights blend_;
  std::vector<Histogram> histograms_;
};

struct ProfileSummary {
  std::size_t visit_count = 0;
  std::optional<std::size_t> window;
  /// Empty before the first visit.
  std::vector<Histogram> histograms;
};

ProfileSummary profile_summary(const SessionProfile& profile);

/// Snapshot document {session_id, visits, window, lambda:{feature:weight}, blend:{w_s,w_r}}.
/// Visits are written as external node ids.
nlohmann::ordered_json session_snapshot(const SessionProfile& profile, const AttributedGraph& g);

/// Rebuilds a session by replaying the snapshot's visits.
SessionProfile restore_session(const nlohmann::ordered_json& snapshot, const AttributedGraph& g,
                               SessionProfile::Binnings binnings);

}  // namespace explorank
