#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace explorank {

/// Dense node index, assigned in node-file order after isolated nodes are dropped.
using NodeId = std::uint32_t;

enum class FeatureKind { numerical, categorical };

std::string_view to_string(FeatureKind kind) noexcept;
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numerical;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

/// Ordered feature declarations. The position of a feature is its index everywhere
/// downstream (binnings, histograms, weights).
class GraphSchema {
 public:
  GraphSchema() = default;
  explicit GraphSchema(std::vector<FeatureSpec> features);

  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  const FeatureSpec& operator[](std::size_t j) const { return features_.at(j); }
  const std::vector<FeatureSpec>& features() const noexcept { return features_; }
  std::optional<std::size_t> find(std::string_view name) const;

  /// Appends a feature; throws InvalidArgument on an empty or duplicate name.
  void append(FeatureSpec spec);

  friend bool operator==(const GraphSchema&, const GraphSchema&) = default;

 private:
  std::vector<FeatureSpec> features_;
};

/// Accepts {"features":[{"name":..., "kind":"numerical"|"categorical"}, ...]}.
GraphSchema schema_from_json(const nlohmann::json& doc);
nlohmann::json schema_to_json(const GraphSchema& schema);
GraphSchema load_schema_file(const std::string& path);

/// Values of one feature for every node. Categorical values are stored as the index
/// of the category in `categories` (sorted, distinct).
struct FeatureColumn {
  FeatureKind kind = FeatureKind::numerical;
  std::vector<double> values;
  std::vector<std::string> categories;

  std::size_t category_code(double value) const noexcept { return static_cast<std::size_t>(value); }
};

/// Immutable undirected, unweighted graph with per-node feature values.
/// No self-loops, no isolated nodes, adjacency symmetric with sorted neighbor lists.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  std::size_t node_count() const noexcept { return external_ids_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  std::size_t feature_count() const noexcept { return schema_.size(); }

  std::span<const NodeId> neighbors(NodeId node) const {
    return {targets_.data() + offsets_[node], targets_.data() + offsets_[node + 1]};
  }
  std::size_t degree(NodeId node) const { return offsets_[node + 1] - offsets_[node]; }

  const GraphSchema& schema() const noexcept { return schema_; }
  const FeatureColumn& feature(std::size_t j) const { return columns_.at(j); }
  double value(NodeId node, std::size_t j) const { return columns_[j].values[node]; }
  /// Human-readable value (category name for categorical features).
  std::string display_value(NodeId node, std::size_t j) const;

  const std::string& label(NodeId node) const { return labels_.at(node); }
  const std::string& external_id(NodeId node) const { return external_ids_.at(node); }
  std::optional<NodeId> find(std::string_view external_id) const;
  /// Like find(), but throws NotFoundError.
  NodeId require(std::string_view external_id) const;
  bool contains(NodeId node) const noexcept { return node < node_count(); }

  /// Returns a copy with one more feature appended to the schema.
  AttributedGraph with_feature(FeatureSpec spec, FeatureColumn column) const;

  /// Canonical byte serialization; equal graphs serialize identically.
  void write_canonical(std::ostream& out) const;
  static AttributedGraph read_canonical(std::istream& in);
  std::uint64_t fingerprint() const;

 private:
  friend class GraphBuilder;
  void rebuild_lookup();

  GraphSchema schema_;
  std::vector<std::string> external_ids_;
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<FeatureColumn> columns_;
  std::unordered_map<std::string, NodeId> lookup_;
};

struct LoadReport {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges = 0;
  std::vector<std::string> isolated_dropped;
};

struct LoadResult {
  AttributedGraph graph;
  LoadReport report;
};

using FeatureValue = std::variant<double, std::string>;

/// Incremental construction of an AttributedGraph. Edges may be added in any
/// orientation and repeated; build() symmetrizes, removes self-loops and duplicates,
/// drops isolated nodes and re-indexes the survivors in insertion order.
class GraphBuilder {
 public:
  explicit GraphBuilder(GraphSchema schema);

  /// Returns the insertion index. Throws LoadError on a duplicate id, a value count
  /// that does not match the schema, a non-finite numerical value or a kind mismatch.
  std::size_t add_node(std::string external_id, std::string label, std::vector<FeatureValue> values);
  void add_edge(std::string_view src, std::string_view dst);
  void add_edge(std::size_t src, std::size_t dst);
  void reserve(std::size_t nodes, std::size_t edges);

  std::size_t node_count() const noexcept { return ids_.size(); }

  LoadResult build() &&;

 private:
  GraphSchema schema_;
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::vector<std::vector<FeatureValue>> values_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t self_loops_ = 0;
};

/// Reads a node table (header `id,label,<feature names...>`) and an edge table
/// (header `src,dst`). Errors carry the offending line number.
LoadResult load_graph(std::istream& edges, std::istream& nodes, const GraphSchema& schema);
LoadResult load_graph_files(const std::string& edge_path, const std::string& node_path,
                            const GraphSchema& schema);

}  // namespace explorank
