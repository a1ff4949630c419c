#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "explorank/graph.hpp"

namespace fixture {

using Edge = std::pair<std::string, std::string>;

/// Graph with one numerical feature "x"; nodes are taken from `values` in order.
inline explorank::AttributedGraph numeric_graph(const std::vector<std::pair<std::string, double>>& values,
                                                const std::vector<Edge>& edges) {
  using namespace explorank;
  GraphBuilder b{GraphSchema({{"x", FeatureKind::numerical}})};
  for (const auto& [id, v] : values) b.add_node(id, id, {v});
  for (const auto& [s, d] : edges) b.add_edge(s, d);
  return std::move(b).build().graph;
}

/// Star with `leaves` leaves around "c"; every node has x = `value`.
inline explorank::AttributedGraph star(std::size_t leaves, double value = 1.0) {
  std::vector<std::pair<std::string, double>> values{{"c", value}};
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < leaves; ++i) {
    values.emplace_back("l" + std::to_string(i), value);
    edges.emplace_back("c", "l" + std::to_string(i));
  }
  return numeric_graph(values, edges);
}

inline std::string data_path(const std::string& name) { return std::string(EXPLORANK_TEST_DATA) + "/" + name; }

}  // namespace fixture
