#include "explorank/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "explorank/error.hpp"
#include "explorank/fingerprint.hpp"

namespace explorank {

Binning Binning::numerical(std::size_t feature, std::vector<double> edges) {
  if (edges.size() < 2) throw InvalidArgument("a numerical binning needs at least two edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw InvalidArgument("bin edges must be finite");
    if (i > 0 && !(edges[i - 1] < edges[i])) throw InvalidArgument("bin edges must be strictly increasing");
  }
  Binning b;
  b.kind_ = FeatureKind::numerical;
  b.feature_ = feature;
  b.edges_ = std::move(edges);
  b.seal();
  return b;
}

Binning Binning::categorical(std::size_t feature, std::vector<std::string> categories) {
  if (categories.empty()) throw InvalidArgument("a categorical binning needs at least one category");
  if (std::set<std::string>(categories.begin(), categories.end()).size() != categories.size()) {
    throw InvalidArgument("categories must be distinct");
  }
  Binning b;
  b.kind_ = FeatureKind::categorical;
  b.feature_ = feature;
  b.categories_ = std::move(categories);
  b.seal();
  return b;
}

void Binning::seal() {
  Fingerprint fp;
  fp.u64(kind_ == FeatureKind::numerical ? 0 : 1).u64(feature_);
  fp.u64(edges_.size());
  for (double e : edges_) fp.f64(e);
  fp.u64(categories_.size());
  for (const auto& c : categories_) fp.str(c);
  fingerprint_ = fp.value();
}

std::size_t Binning::bin_of(double value) const noexcept {
  if (kind_ == FeatureKind::categorical) {
    const auto code = static_cast<std::size_t>(value);
    return std::min(code, categories_.size() - 1);
  }
  const std::size_t bins = edges_.size() - 1;
  if (!(value > edges_.front())) return 0;
  if (value >= edges_.back()) return bins - 1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  return std::min(static_cast<std::size_t>(it - edges_.begin()) - 1, bins - 1);
}

// ---------------------------------------------------------------------------

std::vector<double> mdl_candidate_cuts(std::span<const double> sorted, std::size_t max_candidates) {
  std::vector<double> midpoints;
  std::vector<std::size_t> rank;  // number of values strictly below each midpoint
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] != sorted[i - 1]) {
      midpoints.push_back(sorted[i - 1] + (sorted[i] - sorted[i - 1]) / 2.0);
      rank.push_back(i);
    }
  }
  if (midpoints.size() <= max_candidates) return midpoints;

  std::vector<double> thinned;
  thinned.reserve(max_candidates);
  const double n = static_cast<double>(sorted.size());
  std::size_t last = midpoints.size();
  for (std::size_t k = 1; k <= max_candidates; ++k) {
    const auto target = static_cast<std::size_t>(std::ceil(static_cast<double>(k) * n / static_cast<double>(max_candidates + 1)));
    auto it = std::lower_bound(rank.begin(), rank.end(), target);
    if (it == rank.end()) --it;
    const auto idx = static_cast<std::size_t>(it - rank.begin());
    if (idx != last) {
      thinned.push_back(midpoints[idx]);
      last = idx;
    }
  }
  return thinned;
}

namespace {

double bin_cost(double count, double total, double width) {
  if (count == 0.0) return 0.0;
  return -count * std::log2(count / (total * width));
}

bool better(double cost, std::size_t bins, double best_cost, std::size_t best_bins) {
  if (std::isinf(best_cost)) return !std::isinf(cost);
  const double tol = 1e-12 * std::max({1.0, std::abs(cost), std::abs(best_cost)});
  if (cost < best_cost - tol) return true;
  if (cost > best_cost + tol) return false;
  return bins < best_bins;
}

}  // namespace

double mdl_cost(std::span<const double> sorted, std::span<const double> cuts, std::size_t candidate_count) {
  if (sorted.empty()) throw InvalidArgument("mdl_cost of an empty sample");
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double total = static_cast<double>(sorted.size());
  const double range = hi - lo;
  double cost = std::log2(total);
  if (range <= 0.0) return cost;
  if (!cuts.empty() && candidate_count > 0) {
    cost += static_cast<double>(cuts.size()) * std::log2(static_cast<double>(candidate_count));
  }
  double left = lo;
  std::size_t below = 0;
  for (std::size_t b = 0; b <= cuts.size(); ++b) {
    const double right = b < cuts.size() ? cuts[b] : hi;
    const std::size_t upto = b < cuts.size()
                                 ? static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), right) - sorted.begin())
                                 : sorted.size();
    cost += bin_cost(static_cast<double>(upto - below), total, (right - left) / range);
    below = upto;
    left = right;
  }
  return cost;
}

Binning mdl_binning_over(std::size_t feature, std::span<const double> values, std::span<const double> candidates) {
  if (values.empty()) throw InvalidArgument("mdl_binning of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (!(lo < hi)) {
    const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo));
    return Binning::numerical(feature, {lo - pad, hi + pad});
  }

  std::vector<double> edges{lo};
  for (double c : candidates) {
    if (c > lo && c < hi) edges.push_back(c);
  }
  std::sort(edges.begin() + 1, edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(hi);

  const std::size_t positions = edges.size();  // boundary 0 is lo, boundary positions-1 is hi
  const std::size_t candidate_count = positions - 2;
  const double cut_cost = candidate_count > 0 ? std::log2(static_cast<double>(candidate_count)) : 0.0;
  const double total = static_cast<double>(sorted.size());
  const double range = hi - lo;

  std::vector<double> below(positions);
  for (std::size_t p = 0; p + 1 < positions; ++p) {
    below[p] = static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), edges[p]) - sorted.begin());
  }
  below[positions - 1] = total;

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(positions, inf);
  std::vector<std::size_t> bins(positions, 0);
  std::vector<std::size_t> from(positions, 0);
  best[0] = 0.0;
  for (std::size_t b = 1; b < positions; ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      const double cost = best[a] + (a > 0 ? cut_cost : 0.0) +
                          bin_cost(below[b] - below[a], total, (edges[b] - edges[a]) / range);
      if (better(cost, bins[a] + 1, best[b], bins[b])) {
        best[b] = cost;
        bins[b] = bins[a] + 1;
        from[b] = a;
      }
    }
  }

  std::vector<double> chosen;
  for (std::size_t p = positions - 1; p != 0; p = from[p]) chosen.push_back(edges[p]);
  chosen.push_back(edges[0]);
  std::reverse(chosen.begin(), chosen.end());
  return Binning::numerical(feature, std::move(chosen));
}

Binning mdl_binning(std::size_t feature, std::span<const double> values, const MdlOptions& options) {
  if (values.empty()) throw InvalidArgument("mdl_binning of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto candidates = mdl_candidate_cuts(sorted, options.max_candidates);
  return mdl_binning_over(feature, sorted, candidates);
}

Binning build_binning(const AttributedGraph& g, std::size_t feature, const MdlOptions& options) {
  const auto& col = g.feature(feature);
  if (col.kind == FeatureKind::categorical) return Binning::categorical(feature, col.categories);
  return mdl_binning(feature, col.values, options);
}

std::vector<Binning> build_binnings(const AttributedGraph& g, const MdlOptions& options) {
  std::vector<Binning> out;
  out.reserve(g.feature_count());
  for (std::size_t j = 0; j < g.feature_count(); ++j) out.push_back(build_binning(g, j, options));
  return out;
}

}  // namespace explorank
