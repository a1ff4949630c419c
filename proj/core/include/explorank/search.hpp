#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "explorank/graph.hpp"

namespace explorank {

/// Nodes whose label contains `query` (ASCII case-insensitive), ordered by match
/// position, then degree descending, then node id. An empty query matches every node.
std::vector<NodeId> search_nodes(const AttributedGraph& g, std::string_view query, std::size_t limit);

}  // namespace explorank
