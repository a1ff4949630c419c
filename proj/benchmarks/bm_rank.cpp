#include <benchmark/benchmark.h>

#include "explorank/binning.hpp"
#include "explorank/divergence.hpp"
#include "explorank/ranking.hpp"
#include "explorank/synthetic.hpp"

namespace bm = benchmark;
using namespace explorank;

namespace {

struct Fixture {
  SyntheticGraph synth;
  SurpriseIndex index;
  SessionProfile profile;

  Fixture(std::size_t n, std::size_t f)
      : synth(make_synthetic_graph({n, f, 4, 1.25, 7})),
        index(SurpriseIndex::build(synth.graph, build_binnings(synth.graph), std::vector<double>(f, 1.0))),
        profile("bench", index.binnings()) {
    for (NodeId v = 0; v < 3; ++v) profile.record_visit(synth.graph, synth.hubs[v]);
  }
};

}  // namespace

static void BM_RankCombined(bm::State& st) {
  const Fixture fx(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  RankConfig config;
  config.candidate_cap = 0;
  const Ranker ranker(fx.synth.graph, fx.index, config);
  RankRequest request;
  request.focus = fx.synth.hubs[0];
  for (auto _ : st) {
    auto result = ranker.rank_neighbors(fx.profile, request);
    bm::DoNotOptimize(result.neighbors.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(1));
}

BENCHMARK(BM_RankCombined)
    ->ArgsProduct({{1000, 10000, 100000}, {8}})
    ->ArgsProduct({{10000}, {2, 16, 64}})
    ->Unit(bm::kMillisecond);

static void BM_RankCapped(bm::State& st) {
  const Fixture fx(static_cast<std::size_t>(st.range(0)), 8);
  const Ranker ranker(fx.synth.graph, fx.index);
  RankRequest request;
  request.focus = fx.synth.hubs[0];
  for (auto _ : st) {
    auto result = ranker.rank_neighbors(fx.profile, request);
    bm::DoNotOptimize(result.neighbors.data());
  }
}

BENCHMARK(BM_RankCapped)->Arg(5000)->Arg(50000)->Unit(bm::kMillisecond);

static void BM_JsDivergence(bm::State& st) {
  const auto bins = static_cast<std::size_t>(st.range(0));
  std::vector<double> p(bins, 1.0 / static_cast<double>(bins));
  std::vector<double> q(bins, 0.0);
  q[0] = 1.0;
  for (auto _ : st) bm::DoNotOptimize(js_divergence(p, q));
}

BENCHMARK(BM_JsDivergence)->Arg(4)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
