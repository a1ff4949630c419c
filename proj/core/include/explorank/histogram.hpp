#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "explorank/binning.hpp"
#include "explorank/graph.hpp"

namespace explorank {

/// Probability mass per bin of a shared Binning. Never empty: builders reject
/// empty inputs.
class Histogram {
 public:
  Histogram(std::shared_ptr<const Binning> binning, std::vector<double> mass);

  const Binning& binning() const noexcept { return *binning_; }
  const std::shared_ptr<const Binning>& binning_ptr() const noexcept { return binning_; }
  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t b) const { return mass_.at(b); }
  std::size_t size() const noexcept { return mass_.size(); }

  bool same_binning(const Histogram& other) const noexcept;

 private:
  std::shared_ptr<const Binning> binning_;
  std::vector<double> mass_;
};

/// Per-bin counts of `values` (numerical values or category codes).
std::vector<std::uint64_t> bin_counts(std::span<const double> values, const Binning& binning);

/// mass[b] = count(b) / N. Throws InvalidArgument on empty `values`.
Histogram histogram_over(std::span<const double> values, std::shared_ptr<const Binning> binning);

/// Distribution of feature `j` over the 1-hop neighbors of `node` (the node itself excluded).
Histogram local_distribution(const AttributedGraph& g, NodeId node, std::size_t j,
                             std::shared_ptr<const Binning> binning);

/// Distribution of feature `j` over all nodes.
Histogram global_distribution(const AttributedGraph& g, std::size_t j, std::shared_ptr<const Binning> binning);

/// Writes the local distribution of `node` for the feature binned by `binning`
/// into `out` (size bin_count()). Allocation-free form used by precompute.
void local_mass_into(const AttributedGraph& g, NodeId node, const Binning& binning, std::span<double> out);

/// Versioned cache document: {"version", "feature", "kind", "edges"|"categories", "mass"}.
nlohmann::ordered_json histogram_document(const std::string& feature_name, const Histogram& global);
/// Parses a document produced by histogram_document back into a binning and global mass.
Histogram histogram_from_document(const nlohmann::ordered_json& doc, std::size_t feature);

}  // namespace explorank
