#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "explorank/graph.hpp"

namespace explorank {

/// Bin layout for one feature.
///
/// Numerical: `edges` are strictly increasing cut points; bin k covers
/// [edges[k], edges[k+1]) and the last bin is closed on the right. Values outside
/// the outer edges fall into the boundary bins.
///
/// Categorical: one bin per category; a value is the category's code.
class Binning {
 public:
  static Binning numerical(std::size_t feature, std::vector<double> edges);
  static Binning categorical(std::size_t feature, std::vector<std::string> categories);

  FeatureKind kind() const noexcept { return kind_; }
  std::size_t feature() const noexcept { return feature_; }
  std::size_t bin_count() const noexcept {
    return kind_ == FeatureKind::numerical ? edges_.size() - 1 : categories_.size();
  }
  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& categories() const noexcept { return categories_; }

  std::size_t bin_of(double value) const noexcept;

  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  friend bool operator==(const Binning& a, const Binning& b) noexcept {
    return a.kind_ == b.kind_ && a.feature_ == b.feature_ && a.edges_ == b.edges_ && a.categories_ == b.categories_;
  }

 private:
  Binning() = default;
  void seal();

  FeatureKind kind_ = FeatureKind::numerical;
  std::size_t feature_ = 0;
  std::vector<double> edges_;
  std::vector<std::string> categories_;
  std::uint64_t fingerprint_ = 0;
};

struct MdlOptions {
  /// Candidate cut points are thinned to at most this many by equi-depth subsampling.
  std::size_t max_candidates = 256;
};

/// Midpoints between consecutive distinct values of `sorted`, thinned to at most
/// `max_candidates` at evenly spaced ranks.
std::vector<double> mdl_candidate_cuts(std::span<const double> sorted, std::size_t max_candidates);

/// Two-part code length in bits of `sorted` under the piecewise-uniform histogram
/// with the given interior cuts over [sorted.front(), sorted.back()]:
///   -sum_b n_b log2(n_b / (N w_b)) + (|B| - 1) log2|C| + log2 N
/// where w_b is the bin width relative to the full range and |C| the candidate count.
double mdl_cost(std::span<const double> sorted, std::span<const double> cuts, std::size_t candidate_count);

/// Exact minimizer of mdl_cost over every subset of `candidates` (dynamic
/// programming, O(|C|^2)). Ties go to fewer bins. Candidates outside the open data
/// range are ignored. `values` need not be sorted.
Binning mdl_binning_over(std::size_t feature, std::span<const double> values, std::span<const double> candidates);

/// MDL histogram binning with candidates from mdl_candidate_cuts. Throws
/// InvalidArgument on empty input; all-identical input yields a single bin padded
/// by a few ulps on either side.
Binning mdl_binning(std::size_t feature, std::span<const double> values, const MdlOptions& options = {});

/// MDL binning for numerical columns, one bin per category for categorical ones.
Binning build_binning(const AttributedGraph& g, std::size_t feature, const MdlOptions& options = {});
std::vector<Binning> build_binnings(const AttributedGraph& g, const MdlOptions& options = {});

}  // namespace explorank
