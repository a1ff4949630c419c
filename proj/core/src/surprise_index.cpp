#include "explorank/surprise_index.hpp"

#include <algorithm>
#include <thread>

#include "explorank/divergence.hpp"
#include "explorank/error.hpp"
#include "explorank/profile.hpp"

namespace explorank {

void check_binnings(const AttributedGraph& g, std::span<const Binning> binnings) {
  if (binnings.size() != g.feature_count()) {
    throw IndexMismatch("expected " + std::to_string(g.feature_count()) + " binnings, got " +
                        std::to_string(binnings.size()));
  }
  for (std::size_t j = 0; j < binnings.size(); ++j) {
    const auto& b = binnings[j];
    const auto& col = g.feature(j);
    const auto& name = g.schema()[j].name;
    if (b.feature() != j || b.kind() != col.kind) throw IndexMismatch("binning " + std::to_string(j) + " does not describe feature '" + name + "'");
    if (col.kind == FeatureKind::categorical) {
      if (b.categories() != col.categories) throw IndexMismatch("categories of feature '" + name + "' differ from the binning");
    } else if (!col.values.empty()) {
      const auto [lo, hi] = std::minmax_element(col.values.begin(), col.values.end());
      if (b.edges().front() > *lo || b.edges().back() < *hi) {
        throw IndexMismatch("binning of feature '" + name + "' does not span the feature's values");
      }
    }
  }
}

SurpriseIndex SurpriseIndex::build(const AttributedGraph& g, std::vector<Binning> binnings, std::vector<double> lambda,
                                   const SurpriseIndexOptions& options) {
  check_binnings(g, binnings);
  if (lambda.size() != g.feature_count()) throw InvalidArgument("feature weight vector has the wrong length");
  validate_feature_weights(lambda);

  SurpriseIndex idx;
  idx.node_count_ = g.node_count();
  idx.graph_fingerprint_ = g.fingerprint();
  idx.lambda_ = std::move(lambda);
  const std::size_t f = binnings.size();
  for (auto& b : binnings) idx.binnings_.push_back(std::make_shared<const Binning>(std::move(b)));
  for (std::size_t j = 0; j < f; ++j) idx.globals_.push_back(global_distribution(g, j, idx.binnings_[j]));

  const std::size_t n = g.node_count();
  idx.per_feature_.assign(n * f, 0.0);
  if (options.store_local) {
    idx.local_.resize(f);
    for (std::size_t j = 0; j < f; ++j) idx.local_[j].assign(n * idx.binnings_[j]->bin_count(), 0.0);
  }

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    for (std::size_t j = 0; j < f; ++j) {
      const auto& binning = *idx.binnings_[j];
      const std::size_t bins = binning.bin_count();
      const auto global = idx.globals_[j].mass();
      scratch.resize(bins);
      for (std::size_t i = begin; i < end; ++i) {
        std::span<double> local = options.store_local ? std::span<double>(idx.local_[j].data() + i * bins, bins)
                                                      : std::span<double>(scratch);
        local_mass_into(g, static_cast<NodeId>(i), binning, local);
        idx.per_feature_[i * f + j] = js_divergence(local, global);
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, n / 64));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  idx.rebuild_aggregate();
  return idx;
}

void SurpriseIndex::rebuild_aggregate() {
  const std::size_t f = feature_count();
  aggregate_.assign(node_count_, 0.0);
  for (std::size_t i = 0; i < node_count_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < f; ++j) s += lambda_[j] * per_feature_[i * f + j];
    aggregate_[i] = s;
  }
}

void SurpriseIndex::validate_against(const AttributedGraph& g) const {
  if (g.node_count() != node_count_ || g.fingerprint() != graph_fingerprint_) {
    throw IndexMismatch("surprise index was built from a different graph");
  }
}

}  // namespace explorank
