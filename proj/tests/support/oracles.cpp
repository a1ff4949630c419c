#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace oracle {

using namespace explorank;

AttributedGraph random_graph(const RandomGraphSpec& spec) {
  std::vector<FeatureSpec> features;
  for (std::size_t j = 0; j < spec.numerical; ++j) features.push_back({"x" + std::to_string(j), FeatureKind::numerical});
  for (std::size_t j = 0; j < spec.categorical; ++j) {
    features.push_back({"c" + std::to_string(j), FeatureKind::categorical});
  }
  GraphBuilder builder{GraphSchema(features)};
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> digit(0, 9);
  std::uniform_int_distribution<int> category(0, 3);

  for (std::size_t i = 0; i < spec.nodes; ++i) {
    std::vector<FeatureValue> values;
    for (std::size_t j = 0; j < spec.numerical; ++j) {
      switch (j % 3) {
        case 0:
          values.emplace_back(std::round(normal(rng) * 4.0) / 4.0);
          break;
        case 1:
          values.emplace_back(static_cast<double>(digit(rng)));
          break;
        default:
          values.emplace_back(std::round(-std::log(1.0 - unit(rng)) * 10.0) / 10.0);
      }
    }
    for (std::size_t j = 0; j < spec.categorical; ++j) values.emplace_back("k" + std::to_string(category(rng)));
    builder.add_node("n" + std::to_string(i), "node " + std::to_string(i), values);
  }
  const double p = spec.mean_degree / static_cast<double>(std::max<std::size_t>(1, spec.nodes - 1));
  for (std::size_t a = 0; a < spec.nodes; ++a) {
    for (std::size_t b = a + 1; b < spec.nodes; ++b) {
      if (unit(rng) < p) builder.add_edge(a, b);
    }
  }
  return std::move(builder).build().graph;
}

std::vector<double> random_distribution(std::size_t bins, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(bins);
  double total = 0.0;
  for (auto& x : p) {
    x = unit(rng) < 0.2 ? 0.0 : unit(rng);
    total += x;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    return p;
  }
  for (auto& x : p) x /= total;
  return p;
}

double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (p[b] > 0.0) d += p[b] * std::log(p[b] / q[b]);
  }
  return d / std::log(2.0);
}

double js(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> m(p.size());
  for (std::size_t b = 0; b < p.size(); ++b) m[b] = 0.5 * (p[b] + q[b]);
  return 0.5 * kl(p, m) + 0.5 * kl(q, m);
}

std::size_t bin_index(const Binning& b, double value) {
  if (b.kind() == FeatureKind::categorical) return static_cast<std::size_t>(value);
  const auto& e = b.edges();
  std::size_t k = 0;
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    if (value >= e[i]) k = i;
  }
  return k;
}

std::vector<double> recount(const std::vector<double>& values, const Binning& b) {
  std::vector<double> counts(b.bin_count(), 0.0);
  for (double v : values) counts[bin_index(b, v)] += 1.0;
  for (auto& c : counts) c /= static_cast<double>(values.size());
  return counts;
}

std::vector<double> neighbor_values(const AttributedGraph& g, NodeId node, std::size_t j) {
  std::vector<double> out;
  for (NodeId nb : g.neighbors(node)) out.push_back(g.value(nb, j));
  return out;
}

std::vector<double> column(const AttributedGraph& g, std::size_t j) {
  std::vector<double> out;
  for (NodeId v = 0; v < g.node_count(); ++v) out.push_back(g.value(v, j));
  return out;
}

double mdl_cost(const std::vector<double>& values, const std::vector<double>& cuts, std::size_t candidate_count) {
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double cost = std::log2(n);
  if (hi == lo) return cost;
  std::vector<double> bounds{lo};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(hi);
  cost += static_cast<double>(cuts.size()) * std::log2(static_cast<double>(candidate_count));
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    const bool last = b + 2 == bounds.size();
    double count = 0.0;
    for (double v : values) {
      if (v >= bounds[b] && (v < bounds[b + 1] || (last && v <= bounds[b + 1]))) count += 1.0;
    }
    if (count == 0.0) continue;
    const double width = (bounds[b + 1] - bounds[b]) / (hi - lo);
    cost -= count * std::log2(count / (n * width));
  }
  return cost;
}

double mdl_brute_force(const std::vector<double>& values, const std::vector<double>& candidates) {
  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  if (hi == lo) return std::log2(n);

  // Elementary cells between consecutive candidates; a subset of cuts merges them.
  std::vector<double> bounds{lo};
  bounds.insert(bounds.end(), sorted.begin(), sorted.end());
  bounds.push_back(hi);
  std::vector<double> cell(bounds.size() - 1, 0.0);
  for (double v : values) {
    std::size_t c = 0;
    while (c + 1 < cell.size() && v >= bounds[c + 1]) ++c;
    cell[c] += 1.0;
  }
  const double model = std::log2(static_cast<double>(sorted.size()));
  double best = INFINITY;
  const std::size_t subsets = std::size_t{1} << sorted.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    double cost = std::log2(n);
    double count = 0.0;
    double left = lo;
    for (std::size_t c = 0; c < cell.size(); ++c) {
      count += cell[c];
      const bool close = c + 1 == cell.size() || (mask & (std::size_t{1} << c));
      if (!close) continue;
      const double right = bounds[c + 1];
      if (count > 0.0) cost -= count * std::log2(count / (n * (right - left) / (hi - lo)));
      if (c + 1 < cell.size()) cost += model;
      count = 0.0;
      left = right;
    }
    best = std::min(best, cost);
  }
  return best;
}

std::vector<double> dense_pagerank(const AttributedGraph& g, double damping) {
  const std::size_t n = g.node_count();
  // Augmented system A x = b.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = 1.0;
    a[i][n] = (1.0 - damping) / static_cast<double>(n);
  }
  for (NodeId j = 0; j < n; ++j) {
    for (NodeId i : g.neighbors(j)) a[i][j] -= damping / static_cast<double>(g.degree(j));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

double surprise(const AttributedGraph& g, const std::vector<Binning>& binnings, NodeId node, std::size_t j) {
  return js(recount(neighbor_values(g, node, j), binnings[j]), recount(column(g, j), binnings[j]));
}

std::optional<std::vector<Scored>> rank(const AttributedGraph& g, const std::vector<Binning>& binnings,
                                        const Session& session, NodeId focus, std::size_t k, RankMode mode,
                                        const std::vector<NodeId>& exclude, std::size_t cold_start_visits) {
  const std::size_t f = binnings.size();
  const bool warm = session.visits.size() >= cold_start_visits && !session.visits.empty();
  if (mode == RankMode::interest && !warm) return std::nullopt;

  std::vector<std::vector<double>> profile(f);
  if (!session.visits.empty()) {
    for (std::size_t j = 0; j < f; ++j) {
      std::vector<double> vals;
      for (NodeId v : session.visits) vals.push_back(g.value(v, j));
      profile[j] = recount(vals, binnings[j]);
    }
  }

  const std::set<NodeId> skip(exclude.begin(), exclude.end());
  std::vector<Scored> all;
  for (NodeId c : g.neighbors(focus)) {
    if (skip.count(c)) continue;
    Scored s{c, 0.0, 0.0, std::nullopt};
    double r_total = 0.0;
    double t_total = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      const double sj = surprise(g, binnings, c, j);
      s.surprise += session.lambda[j] * sj;
      if (warm) {
        const double rj = js(recount(neighbor_values(g, c, j), binnings[j]), profile[j]);
        r_total += session.lambda[j] * rj;
        t_total += session.lambda[j] * (session.w_s * sj + session.w_r * (1.0 - rj));
      }
    }
    switch (mode) {
      case RankMode::surprise:
        s.score = s.surprise;
        break;
      case RankMode::interest:
        s.interest = r_total;
        s.score = r_total;
        break;
      case RankMode::combined:
        if (warm) {
          s.interest = r_total;
          s.score = t_total;
        } else {
          s.score = s.surprise;
        }
        break;
    }
    all.push_back(s);
  }

  const bool cold = mode == RankMode::combined && !warm;
  std::sort(all.begin(), all.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return mode == RankMode::interest ? a.score < b.score : a.score > b.score;
    if (cold && g.degree(a.node) != g.degree(b.node)) return g.degree(a.node) > g.degree(b.node);
    return a.node < b.node;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace oracle
