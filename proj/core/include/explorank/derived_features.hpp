#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "explorank/graph.hpp"

namespace explorank {

/// |N(i)| for every node.
std::vector<double> derive_degree(const AttributedGraph& g);

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 100;
};

struct PageRankResult {
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration of PageRank on the undirected graph, each edge taken in both
/// directions. Stops when the L1 change between iterates drops below `tolerance`.
/// Scores are renormalized to sum to one after every step.
PageRankResult derive_pagerank(const AttributedGraph& g, const PageRankOptions& options = {});

/// Appends "degree" and/or "pagerank" numerical features, in the order given.
/// Unknown names throw InvalidArgument.
AttributedGraph with_derived_features(const AttributedGraph& g, const std::vector<std::string>& names,
                                      const PageRankOptions& options = {});

}  // namespace explorank
