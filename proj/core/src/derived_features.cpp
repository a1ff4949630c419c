#include "explorank/derived_features.hpp"

#include <cmath>

#include "explorank/error.hpp"

namespace explorank {

std::vector<double> derive_degree(const AttributedGraph& g) {
  std::vector<double> out(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) out[i] = static_cast<double>(g.degree(i));
  return out;
}

PageRankResult derive_pagerank(const AttributedGraph& g, const PageRankOptions& options) {
  if (g.node_count() == 0) throw InvalidArgument("pagerank on an empty graph");
  if (!(options.damping > 0.0 && options.damping < 1.0)) throw InvalidArgument("damping must lie in (0,1)");
  if (!(options.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");

  const std::size_t n = g.node_count();
  const double teleport = (1.0 - options.damping) / static_cast<double>(n);
  PageRankResult result;
  result.scores.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> share(n);
  std::vector<double> next(n);

  while (result.iterations < options.max_iterations) {
    for (NodeId i = 0; i < n; ++i) share[i] = result.scores[i] / static_cast<double>(g.degree(i));
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      double in = 0.0;
      for (NodeId nb : g.neighbors(i)) in += share[nb];
      next[i] = teleport + options.damping * in;
      total += next[i];
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      delta += std::abs(next[i] - result.scores[i]);
    }
    result.scores.swap(next);
    ++result.iterations;
    if (delta < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

AttributedGraph with_derived_features(const AttributedGraph& g, const std::vector<std::string>& names,
                                      const PageRankOptions& options) {
  AttributedGraph out = g;
  for (const auto& name : names) {
    FeatureColumn col;
    col.kind = FeatureKind::numerical;
    if (name == "degree") {
      col.values = derive_degree(g);
    } else if (name == "pagerank") {
      col.values = derive_pagerank(g, options).scores;
    } else {
      throw InvalidArgument("unknown derived feature '" + name + "' (expected degree or pagerank)");
    }
    out = out.with_feature({name, FeatureKind::numerical}, std::move(col));
  }
  return out;
}

}  // namespace explorank
