#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "explorank/graph.hpp"

namespace explorank {

/// Hub-and-leaf graph with controlled neighborhood size. `hubs` nodes form a
/// clique; each hub is also linked to distinct leaves drawn from a shared pool so
/// that every hub has exactly `neighborhood` neighbors. Features cycle through
/// uniform, power-law and bimodal value distributions.
struct SyntheticSpec {
  std::size_t neighborhood = 1000;
  std::size_t features = 8;
  std::size_t hubs = 8;
  /// Leaf pool size relative to the neighborhood size.
  double pool_factor = 1.25;
  std::uint64_t seed = 1;
};

struct SyntheticGraph {
  AttributedGraph graph;
  std::vector<NodeId> hubs;
};

SyntheticGraph make_synthetic_graph(const SyntheticSpec& spec);

enum class WalkOrder { rand, hop };
std::string_view to_string(WalkOrder order) noexcept;
WalkOrder parse_walk_order(std::string_view text);

/// Next focus of a benchmark walk among `eligible` nodes not yet in `traversed`.
/// rand: uniform over all untraversed eligible nodes. hop: uniform over the
/// untraversed eligible neighbors of `current`, falling back to rand when there
/// are none. Returns nullopt when every eligible node has been traversed.
std::optional<NodeId> next_focus(WalkOrder order, const AttributedGraph& g, NodeId current,
                                 std::span<const NodeId> eligible, const std::vector<bool>& traversed,
                                 std::mt19937_64& rng);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x. R^2 is 1 when y is constant and exactly fit.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct BenchConfig {
  std::vector<std::size_t> neighborhoods{1000, 2000, 5000, 10000, 50000, 100000};
  std::vector<std::size_t> features{8};
  std::vector<WalkOrder> orders{WalkOrder::rand, WalkOrder::hop};
  /// Timed ranking calls per (n, f, order).
  std::size_t repeats = 10;
  std::size_t k = 10;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::size_t neighborhood = 0;
  std::size_t features = 0;
  WalkOrder order = WalkOrder::rand;
  double mean_ms = 0.0;
  double stdev_ms = 0.0;
  std::size_t calls = 0;
  /// JS evaluations per ranking call; every call must agree for this to be set.
  std::uint64_t js_per_call = 0;
  bool js_count_consistent = true;
};

/// Times warm combined rankings (candidate cap disabled, three-visit profile) over
/// hub walks on synthetic graphs. Only the ranking call is timed.
std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row = {});

struct BenchFit {
  std::string_view axis;  // "neighbors" or "features"
  WalkOrder order = WalkOrder::rand;
  std::size_t fixed = 0;  // the other axis' value
  LinearFit fit;
};

/// Fits mean time against n for each (order, f) with several n, and against f for
/// each (order, n) with several f.
std::vector<BenchFit> fit_bench(std::span<const BenchRow> rows);

}  // namespace explorank
