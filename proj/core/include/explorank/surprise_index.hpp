#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "explorank/binning.hpp"
#include "explorank/graph.hpp"
#include "explorank/histogram.hpp"

namespace explorank {

struct SurpriseIndexOptions {
  /// Keep every node's local distributions. When false, rankers recompute them
  /// on demand through a LocalHistogramCache.
  bool store_local = true;
  /// Worker threads for precompute. Results do not depend on this.
  unsigned threads = 1;
};

/// Precomputed surprise for every node: the JS divergence between each node's
/// neighborhood distribution and the global distribution, per feature, plus the
/// weighted aggregate under the build-time feature weights. Immutable once built.
class SurpriseIndex {
 public:
  using Binnings = std::vector<std::shared_ptr<const Binning>>;

  /// Throws IndexMismatch when the binnings do not fit the graph's features and
  /// InvalidArgument on invalid weights.
  static SurpriseIndex build(const AttributedGraph& g, std::vector<Binning> binnings, std::vector<double> lambda,
                             const SurpriseIndexOptions& options = {});

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t feature_count() const noexcept { return binnings_.size(); }

  /// s_i under the build-time weights.
  double surprise(NodeId node) const { return aggregate_.at(node); }
  double feature_surprise(NodeId node, std::size_t j) const { return per_feature_[node * feature_count() + j]; }
  std::span<const double> feature_surprises(NodeId node) const {
    return {per_feature_.data() + node * feature_count(), feature_count()};
  }

  const std::vector<double>& lambda() const noexcept { return lambda_; }
  const Binnings& binnings() const noexcept { return binnings_; }
  const Histogram& global(std::size_t j) const { return globals_.at(j); }

  bool has_local() const noexcept { return !local_.empty(); }
  /// Requires has_local().
  std::span<const double> local_mass(NodeId node, std::size_t j) const {
    const std::size_t bins = binnings_[j]->bin_count();
    return {local_[j].data() + node * bins, bins};
  }

  std::uint64_t graph_fingerprint() const noexcept { return graph_fingerprint_; }

  /// Throws IndexMismatch unless `g` is the graph this index was built from.
  void validate_against(const AttributedGraph& g) const;

 private:
  friend struct IndexCodec;
  SurpriseIndex() = default;
  void rebuild_aggregate();

  std::size_t node_count_ = 0;
  std::uint64_t graph_fingerprint_ = 0;
  std::vector<double> lambda_;
  Binnings binnings_;
  std::vector<Histogram> globals_;
  std::vector<double> per_feature_;          // node-major, node_count * features
  std::vector<double> aggregate_;
  std::vector<std::vector<double>> local_;   // per feature, node-major, node_count * bins
};

/// Free-function spelling of SurpriseIndex::build.
inline SurpriseIndex precompute_surprise(const AttributedGraph& g, std::vector<Binning> binnings,
                                         std::vector<double> lambda, const SurpriseIndexOptions& options = {}) {
  return SurpriseIndex::build(g, std::move(binnings), std::move(lambda), options);
}

/// Throws IndexMismatch unless binning j covers feature j of `g`: same kind, the
/// column's categories, or edges spanning the column's min and max.
void check_binnings(const AttributedGraph& g, std::span<const Binning> binnings);

}  // namespace explorank
