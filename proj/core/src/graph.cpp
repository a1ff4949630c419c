#include "explorank/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "explorank/error.hpp"
#include "explorank/fingerprint.hpp"
#include "explorank/tabular.hpp"

namespace explorank {

std::string_view to_string(FeatureKind kind) noexcept {
  return kind == FeatureKind::numerical ? "numerical" : "categorical";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "numerical") return FeatureKind::numerical;
  if (text == "categorical") return FeatureKind::categorical;
  throw InvalidArgument("unknown feature kind '" + std::string(text) + "'");
}

GraphSchema::GraphSchema(std::vector<FeatureSpec> features) {
  for (auto& f : features) append(std::move(f));
}

std::optional<std::size_t> GraphSchema::find(std::string_view name) const {
  for (std::size_t j = 0; j < features_.size(); ++j) {
    if (features_[j].name == name) return j;
  }
  return std::nullopt;
}

void GraphSchema::append(FeatureSpec spec) {
  if (spec.name.empty()) throw InvalidArgument("feature name must not be empty");
  if (spec.name == "id" || spec.name == "label") {
    throw InvalidArgument("feature name '" + spec.name + "' is reserved");
  }
  if (find(spec.name)) throw InvalidArgument("duplicate feature name '" + spec.name + "'");
  features_.push_back(std::move(spec));
}

GraphSchema schema_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
    throw InvalidArgument("schema must be an object with a 'features' array");
  }
  GraphSchema schema;
  for (const auto& f : doc["features"]) {
    if (!f.is_object() || !f.contains("name") || !f["name"].is_string()) {
      throw InvalidArgument("schema feature entries need a string 'name'");
    }
    const auto kind = f.value("kind", std::string("numerical"));
    schema.append({f["name"].get<std::string>(), parse_feature_kind(kind)});
  }
  if (schema.empty()) throw InvalidArgument("schema declares no features");
  return schema;
}

nlohmann::json schema_to_json(const GraphSchema& schema) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : schema.features()) {
    features.push_back({{"name", f.name}, {"kind", to_string(f.kind)}});
  }
  return nlohmann::json{{"features", features}};
}

GraphSchema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open schema file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError("schema file " + path + ": " + e.what());
  }
  return schema_from_json(doc);
}

std::string AttributedGraph::display_value(NodeId node, std::size_t j) const {
  const auto& col = columns_.at(j);
  if (col.kind == FeatureKind::categorical) return col.categories.at(col.category_code(col.values.at(node)));
  std::ostringstream os;
  os.precision(17);
  os << col.values.at(node);
  return os.str();
}

std::optional<NodeId> AttributedGraph::find(std::string_view external_id) const {
  auto it = lookup_.find(std::string(external_id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

NodeId AttributedGraph::require(std::string_view external_id) const {
  if (auto id = find(external_id)) return *id;
  throw NotFoundError("unknown node '" + std::string(external_id) + "'");
}

AttributedGraph AttributedGraph::with_feature(FeatureSpec spec, FeatureColumn column) const {
  if (column.values.size() != node_count()) {
    throw InvalidArgument("derived feature '" + spec.name + "' has wrong length");
  }
  if (spec.kind != column.kind) throw InvalidArgument("derived feature kind mismatch");
  AttributedGraph g = *this;
  g.schema_.append(std::move(spec));
  g.columns_.push_back(std::move(column));
  return g;
}

void AttributedGraph::rebuild_lookup() {
  lookup_.clear();
  lookup_.reserve(external_ids_.size());
  for (std::size_t i = 0; i < external_ids_.size(); ++i) {
    lookup_.emplace(external_ids_[i], static_cast<NodeId>(i));
  }
}

void AttributedGraph::write_canonical(std::ostream& out) const {
  using namespace detail;
  put_u64(out, schema_.size());
  for (const auto& f : schema_.features()) {
    put_string(out, f.name);
    put_u64(out, f.kind == FeatureKind::numerical ? 0 : 1);
  }
  put_u64(out, node_count());
  for (std::size_t i = 0; i < node_count(); ++i) {
    put_string(out, external_ids_[i]);
    put_string(out, labels_[i]);
  }
  put_array(out, std::span<const std::uint64_t>(offsets_));
  put_array(out, std::span<const NodeId>(targets_));
  for (const auto& col : columns_) {
    put_array(out, std::span<const double>(col.values));
    put_u64(out, col.categories.size());
    for (const auto& c : col.categories) put_string(out, c);
  }
}

AttributedGraph AttributedGraph::read_canonical(std::istream& in) {
  using namespace detail;
  AttributedGraph g;
  const auto features = get_u64(in);
  if (features > (1u << 16)) throw IndexMismatch("implausible feature count");
  for (std::uint64_t j = 0; j < features; ++j) {
    auto name = get_string(in);
    const auto kind = get_u64(in) == 0 ? FeatureKind::numerical : FeatureKind::categorical;
    g.schema_.append({std::move(name), kind});
  }
  const auto n = get_u64(in);
  if (n > (1ULL << 32)) throw IndexMismatch("implausible node count");
  g.external_ids_.resize(n);
  g.labels_.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    g.external_ids_[i] = get_string(in);
    g.labels_[i] = get_string(in);
  }
  g.offsets_ = get_array<std::uint64_t>(in);
  g.targets_ = get_array<NodeId>(in);
  if (g.offsets_.size() != n + 1 || g.offsets_.back() != g.targets_.size()) {
    throw IndexMismatch("inconsistent adjacency in binary graph");
  }
  for (std::uint64_t j = 0; j < features; ++j) {
    FeatureColumn col;
    col.kind = g.schema_[j].kind;
    col.values = get_array<double>(in);
    if (col.values.size() != n) throw IndexMismatch("inconsistent feature column length");
    const auto cats = get_u64(in);
    for (std::uint64_t c = 0; c < cats; ++c) col.categories.push_back(get_string(in));
    g.columns_.push_back(std::move(col));
  }
  g.rebuild_lookup();
  return g;
}

std::uint64_t AttributedGraph::fingerprint() const {
  std::ostringstream os;
  write_canonical(os);
  const auto bytes = os.str();
  return Fingerprint{}.bytes(bytes.data(), bytes.size()).value();
}

// ---------------------------------------------------------------------------

GraphBuilder::GraphBuilder(GraphSchema schema) : schema_(std::move(schema)) {
  if (schema_.empty()) throw InvalidArgument("schema declares no features");
}

std::size_t GraphBuilder::add_node(std::string external_id, std::string label,
                                   std::vector<FeatureValue> values) {
  if (external_id.empty()) throw LoadError("empty node id");
  if (values.size() != schema_.size()) {
    throw LoadError("node '" + external_id + "' has " + std::to_string(values.size()) +
                    " feature values, schema declares " + std::to_string(schema_.size()));
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto& spec = schema_[j];
    if (spec.kind == FeatureKind::numerical) {
      const double* v = std::get_if<double>(&values[j]);
      if (!v) throw LoadError("feature '" + spec.name + "' of node '" + external_id + "' must be numerical");
      if (!std::isfinite(*v)) {
        throw LoadError("non-finite value for feature '" + spec.name + "' of node '" + external_id + "'");
      }
    } else if (!std::holds_alternative<std::string>(values[j])) {
      throw LoadError("feature '" + spec.name + "' of node '" + external_id + "' must be categorical");
    } else if (std::get<std::string>(values[j]).empty()) {
      throw LoadError("missing value for feature '" + spec.name + "' of node '" + external_id + "'");
    }
  }
  const auto index = ids_.size();
  if (!index_.emplace(external_id, index).second) {
    throw LoadError("duplicate node id '" + external_id + "'");
  }
  ids_.push_back(std::move(external_id));
  labels_.push_back(std::move(label));
  values_.push_back(std::move(values));
  return index;
}

void GraphBuilder::add_edge(std::string_view src, std::string_view dst) {
  auto a = index_.find(std::string(src));
  if (a == index_.end()) throw LoadError("edge references unknown node '" + std::string(src) + "'");
  auto b = index_.find(std::string(dst));
  if (b == index_.end()) throw LoadError("edge references unknown node '" + std::string(dst) + "'");
  add_edge(a->second, b->second);
}

void GraphBuilder::add_edge(std::size_t src, std::size_t dst) {
  if (src >= ids_.size() || dst >= ids_.size()) throw LoadError("edge references unknown node index");
  if (src == dst) {
    ++self_loops_;
    return;
  }
  edges_.emplace_back(static_cast<std::uint32_t>(std::min(src, dst)), static_cast<std::uint32_t>(std::max(src, dst)));
}

void GraphBuilder::reserve(std::size_t nodes, std::size_t edges) {
  ids_.reserve(nodes);
  labels_.reserve(nodes);
  values_.reserve(nodes);
  index_.reserve(nodes);
  edges_.reserve(edges);
}

LoadResult GraphBuilder::build() && {
  LoadResult result;
  LoadReport& report = result.report;
  report.self_loops_dropped = self_loops_;

  std::sort(edges_.begin(), edges_.end());
  const auto unique_end = std::unique(edges_.begin(), edges_.end());
  report.duplicate_edges = static_cast<std::size_t>(edges_.end() - unique_end);
  edges_.erase(unique_end, edges_.end());

  const std::size_t n = ids_.size();
  std::vector<std::uint64_t> degree(n, 0);
  for (const auto& [a, b] : edges_) {
    ++degree[a];
    ++degree[b];
  }

  constexpr auto dropped = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap(n, dropped);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] == 0) {
      report.isolated_dropped.push_back(ids_[i]);
    } else {
      remap[i] = next++;
    }
  }

  AttributedGraph& g = result.graph;
  g.schema_ = schema_;
  g.external_ids_.reserve(next);
  g.labels_.reserve(next);
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[i] == dropped) continue;
    g.external_ids_.push_back(std::move(ids_[i]));
    g.labels_.push_back(std::move(labels_[i]));
  }

  g.offsets_.assign(static_cast<std::size_t>(next) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[i] != dropped) g.offsets_[remap[i] + 1] = degree[i];
  }
  for (std::size_t i = 0; i < next; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.resize(g.offsets_.back());
  std::vector<std::uint64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b] : edges_) {
    g.targets_[fill[remap[a]]++] = remap[b];
    g.targets_[fill[remap[b]]++] = remap[a];
  }
  for (std::size_t i = 0; i < next; ++i) {
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }

  for (std::size_t j = 0; j < schema_.size(); ++j) {
    FeatureColumn col;
    col.kind = schema_[j].kind;
    col.values.reserve(next);
    if (col.kind == FeatureKind::numerical) {
      for (std::size_t i = 0; i < n; ++i) {
        if (remap[i] != dropped) col.values.push_back(std::get<double>(values_[i][j]));
      }
    } else {
      std::set<std::string> distinct;
      for (std::size_t i = 0; i < n; ++i) {
        if (remap[i] != dropped) distinct.insert(std::get<std::string>(values_[i][j]));
      }
      col.categories.assign(distinct.begin(), distinct.end());
      std::map<std::string_view, std::size_t> code;
      for (std::size_t c = 0; c < col.categories.size(); ++c) code.emplace(col.categories[c], c);
      for (std::size_t i = 0; i < n; ++i) {
        if (remap[i] != dropped) {
          col.values.push_back(static_cast<double>(code.at(std::get<std::string>(values_[i][j]))));
        }
      }
    }
    g.columns_.push_back(std::move(col));
  }
  g.rebuild_lookup();
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, std::size_t line, const std::string& feature) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty()) throw LoadError("missing value for feature '" + feature + "'", line);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw LoadError("cannot parse '" + std::string(text) + "' as a number for feature '" + feature + "'", line);
  }
  if (!std::isfinite(v)) throw LoadError("non-finite value for feature '" + feature + "'", line);
  return v;
}

std::size_t column_of(const std::vector<std::string>& header, std::string_view name, std::size_t line) {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (trim(header[c]) == name) return c;
  }
  throw LoadError("missing column '" + std::string(name) + "' in header", line);
}

}  // namespace

LoadResult load_graph(std::istream& edges, std::istream& nodes, const GraphSchema& schema) {
  GraphBuilder builder(schema);

  TabularReader node_reader(nodes);
  const auto& header = node_reader.header();
  const auto id_col = column_of(header, "id", node_reader.line());
  std::optional<std::size_t> label_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (trim(header[c]) == "label") label_col = c;
  }
  std::vector<std::size_t> feature_cols;
  for (const auto& f : schema.features()) feature_cols.push_back(column_of(header, f.name, node_reader.line()));

  std::vector<std::string> row;
  while (node_reader.next(row)) {
    const auto line = node_reader.line();
    if (row.size() != header.size()) {
      throw LoadError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(row.size()), line);
    }
    std::vector<FeatureValue> values;
    values.reserve(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& raw = row[feature_cols[j]];
      if (schema[j].kind == FeatureKind::numerical) {
        values.emplace_back(parse_number(raw, line, schema[j].name));
      } else {
        auto v = std::string(trim(raw));
        if (v.empty()) throw LoadError("missing value for feature '" + schema[j].name + "'", line);
        values.emplace_back(std::move(v));
      }
    }
    auto id = std::string(trim(row[id_col]));
    auto label = label_col ? row[*label_col] : id;
    try {
      builder.add_node(std::move(id), std::move(label), std::move(values));
    } catch (const LoadError& e) {
      throw LoadError(e.what(), line);
    }
  }

  TabularReader edge_reader(edges);
  const auto src_col = column_of(edge_reader.header(), "src", edge_reader.line());
  const auto dst_col = column_of(edge_reader.header(), "dst", edge_reader.line());
  while (edge_reader.next(row)) {
    const auto line = edge_reader.line();
    if (row.size() != edge_reader.header().size()) {
      throw LoadError("expected " + std::to_string(edge_reader.header().size()) + " fields, found " +
                          std::to_string(row.size()),
                      line);
    }
    try {
      builder.add_edge(trim(row[src_col]), trim(row[dst_col]));
    } catch (const LoadError& e) {
      throw LoadError(e.what(), line);
    }
  }
  return std::move(builder).build();
}

LoadResult load_graph_files(const std::string& edge_path, const std::string& node_path, const GraphSchema& schema) {
  std::ifstream nodes(node_path);
  if (!nodes) throw LoadError("cannot open node file " + node_path);
  std::ifstream edges(edge_path);
  if (!edges) throw LoadError("cannot open edge file " + edge_path);
  return load_graph(edges, nodes, schema);
}

}  // namespace explorank
