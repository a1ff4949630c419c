#include "explorank/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "explorank/binning.hpp"
#include "explorank/divergence.hpp"
#include "explorank/error.hpp"
#include "explorank/profile.hpp"
#include "explorank/ranking.hpp"
#include "explorank/surprise_index.hpp"

namespace explorank {

std::string_view to_string(WalkOrder order) noexcept { return order == WalkOrder::rand ? "rand" : "hop"; }

WalkOrder parse_walk_order(std::string_view text) {
  if (text == "rand") return WalkOrder::rand;
  if (text == "hop") return WalkOrder::hop;
  throw InvalidArgument("unknown walk order '" + std::string(text) + "' (expected rand or hop)");
}

namespace {

double draw_feature(std::size_t j, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (j % 3) {
    case 0:
      return unit(rng);
    case 1:
      // Pareto, shape 1.5, minimum 1.
      return std::pow(1.0 - unit(rng), -1.0 / 1.5);
    default: {
      std::normal_distribution<double> normal(unit(rng) < 0.5 ? 0.0 : 5.0, 1.0);
      return normal(rng);
    }
  }
}

}  // namespace

SyntheticGraph make_synthetic_graph(const SyntheticSpec& spec) {
  if (spec.features == 0) throw InvalidArgument("synthetic graph needs at least one feature");
  if (spec.hubs < 2) throw InvalidArgument("synthetic graph needs at least two hubs");
  if (spec.neighborhood < spec.hubs) throw InvalidArgument("neighborhood must be at least the hub count");

  std::vector<FeatureSpec> features;
  for (std::size_t j = 0; j < spec.features; ++j) features.push_back({"f" + std::to_string(j), FeatureKind::numerical});
  GraphBuilder builder{GraphSchema(std::move(features))};

  const std::size_t leaves_per_hub = spec.neighborhood - (spec.hubs - 1);
  const auto pool = std::max<std::size_t>(
      leaves_per_hub, static_cast<std::size_t>(std::ceil(spec.pool_factor * static_cast<double>(spec.neighborhood))));
  builder.reserve(spec.hubs + pool, spec.hubs * spec.neighborhood);

  std::mt19937_64 rng(spec.seed);
  std::vector<FeatureValue> values(spec.features);
  auto add = [&](const std::string& id) {
    for (std::size_t j = 0; j < spec.features; ++j) values[j] = draw_feature(j, rng);
    return builder.add_node(id, id, values);
  };
  std::vector<std::size_t> hub_index;
  for (std::size_t h = 0; h < spec.hubs; ++h) hub_index.push_back(add("h" + std::to_string(h)));
  std::vector<std::size_t> leaf_index;
  leaf_index.reserve(pool);
  for (std::size_t l = 0; l < pool; ++l) leaf_index.push_back(add("l" + std::to_string(l)));

  for (std::size_t a = 0; a < spec.hubs; ++a) {
    for (std::size_t b = a + 1; b < spec.hubs; ++b) builder.add_edge(hub_index[a], hub_index[b]);
  }
  std::vector<std::size_t> order(pool);
  for (std::size_t h = 0; h < spec.hubs; ++h) {
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < leaves_per_hub; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool - 1);
      std::swap(order[i], order[pick(rng)]);
      builder.add_edge(hub_index[h], leaf_index[order[i]]);
    }
  }

  auto loaded = std::move(builder).build();
  SyntheticGraph out{std::move(loaded.graph), {}};
  for (std::size_t h = 0; h < spec.hubs; ++h) out.hubs.push_back(out.graph.require("h" + std::to_string(h)));
  return out;
}

std::optional<NodeId> next_focus(WalkOrder order, const AttributedGraph& g, NodeId current,
                                 std::span<const NodeId> eligible, const std::vector<bool>& traversed,
                                 std::mt19937_64& rng) {
  std::vector<NodeId> pool;
  if (order == WalkOrder::hop) {
    std::vector<NodeId> sorted(eligible.begin(), eligible.end());
    std::sort(sorted.begin(), sorted.end());
    for (NodeId nb : g.neighbors(current)) {
      if (!traversed[nb] && std::binary_search(sorted.begin(), sorted.end(), nb)) pool.push_back(nb);
    }
  }
  if (pool.empty()) {
    for (NodeId v : eligible) {
      if (!traversed[v]) pool.push_back(v);
    }
  }
  if (pool.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("linear fit needs at least two paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("linear fit needs at least two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
  return fit;
}

std::vector<BenchRow> run_bench(const BenchConfig& config, const std::function<void(const BenchRow&)>& on_row) {
  if (config.repeats == 0) throw InvalidArgument("bench needs at least one repeat");
  std::vector<BenchRow> rows;
  const std::size_t hubs = std::max<std::size_t>(4, config.repeats + 1);
  for (std::size_t n : config.neighborhoods) {
    for (std::size_t f : config.features) {
      SyntheticSpec spec;
      spec.neighborhood = n;
      spec.features = f;
      spec.hubs = hubs;
      spec.seed = config.seed ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL) ^ (f << 1);
      const auto synth = make_synthetic_graph(spec);
      const auto& g = synth.graph;
      const auto index = SurpriseIndex::build(g, build_binnings(g), std::vector<double>(f, 1.0));
      RankConfig rank_config;
      rank_config.candidate_cap = 0;
      const Ranker ranker(g, index, rank_config);

      for (WalkOrder order : config.orders) {
        std::mt19937_64 rng(spec.seed + (order == WalkOrder::hop ? 1 : 0));
        SessionProfile profile("bench", index.binnings());
        std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(g.node_count() - 1));
        for (int v = 0; v < 3; ++v) profile.record_visit(g, any(rng));

        std::vector<bool> traversed(g.node_count(), false);
        std::uniform_int_distribution<std::size_t> first(0, synth.hubs.size() - 1);
        NodeId focus = synth.hubs[first(rng)];
        traversed[focus] = true;
        RankRequest request;
        request.k = config.k;
        request.mode = RankMode::combined;

        request.focus = focus;
        (void)ranker.rank_neighbors(profile, request);  // warm-up, untimed

        BenchRow row;
        row.neighborhood = n;
        row.features = f;
        row.order = order;
        std::vector<double> times;
        for (std::size_t r = 0; r < config.repeats; ++r) {
          request.focus = focus;
          reset_js_evaluation_count();
          const auto start = std::chrono::steady_clock::now();
          const auto result = ranker.rank_neighbors(profile, request);
          const auto stop = std::chrono::steady_clock::now();
          const auto calls = js_evaluation_count();
          if (r == 0) row.js_per_call = calls;
          row.js_count_consistent = row.js_count_consistent && calls == row.js_per_call && !result.cold_start;
          times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());

          auto next = next_focus(order, g, focus, synth.hubs, traversed, rng);
          if (!next) {
            std::fill(traversed.begin(), traversed.end(), false);
            next = next_focus(order, g, focus, synth.hubs, traversed, rng);
          }
          focus = *next;
          traversed[focus] = true;
        }
        row.calls = times.size();
        const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
        double var = 0.0;
        for (double t : times) var += (t - mean) * (t - mean);
        row.mean_ms = mean;
        row.stdev_ms = times.size() > 1 ? std::sqrt(var / static_cast<double>(times.size() - 1)) : 0.0;
        if (on_row) on_row(row);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<BenchFit> fit_bench(std::span<const BenchRow> rows) {
  std::vector<BenchFit> fits;
  std::map<std::pair<int, std::size_t>, std::pair<std::vector<double>, std::vector<double>>> by_n, by_f;
  for (const auto& r : rows) {
    auto& a = by_n[{static_cast<int>(r.order), r.features}];
    a.first.push_back(static_cast<double>(r.neighborhood));
    a.second.push_back(r.mean_ms);
    auto& b = by_f[{static_cast<int>(r.order), r.neighborhood}];
    b.first.push_back(static_cast<double>(r.features));
    b.second.push_back(r.mean_ms);
  }
  auto emit = [&](std::string_view axis, const auto& groups) {
    for (const auto& [key, xy] : groups) {
      std::vector<double> distinct = xy.first;
      std::sort(distinct.begin(), distinct.end());
      if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) continue;
      fits.push_back({axis, static_cast<WalkOrder>(key.first), key.second, linear_fit(xy.first, xy.second)});
    }
  };
  emit("neighbors", by_n);
  emit("features", by_f);
  return fits;
}

}  // namespace explorank
