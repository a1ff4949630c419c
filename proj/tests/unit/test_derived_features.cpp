#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "explorank/derived_features.hpp"
#include "explorank/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace explorank;

namespace {

AttributedGraph complete(std::size_t n) {
  std::vector<std::pair<std::string, double>> values;
  std::vector<fixture::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    values.emplace_back("v" + std::to_string(i), 0.0);
    for (std::size_t j = 0; j < i; ++j) edges.emplace_back("v" + std::to_string(i), "v" + std::to_string(j));
  }
  return fixture::numeric_graph(values, edges);
}

}  // namespace

TEST(DeriveDegree, Examples) {
  const auto path = fixture::numeric_graph({{"a", 0}, {"b", 0}, {"c", 0}}, {{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(derive_degree(path), (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(derive_degree(complete(4)), (std::vector<double>{3, 3, 3, 3}));
  const auto s = fixture::star(5);
  EXPECT_EQ(derive_degree(s), (std::vector<double>{5, 1, 1, 1, 1, 1}));
}

TEST(DerivePagerank, SymmetricGraphs) {
  const auto r3 = derive_pagerank(complete(3));
  for (double x : r3.scores) EXPECT_NEAR(x, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(r3.converged);
  const auto r2 = derive_pagerank(fixture::numeric_graph({{"a", 0}, {"b", 0}}, {{"a", "b"}}));
  EXPECT_NEAR(r2.scores[0], 0.5, 1e-12);
  EXPECT_NEAR(r2.scores[1], 0.5, 1e-12);
}

TEST(DerivePagerank, StarMatchesDenseSolve) {
  const auto g = fixture::star(3);
  PageRankOptions opts;
  opts.tolerance = 1e-14;
  opts.max_iterations = 1000;
  const auto r = derive_pagerank(g, opts);
  const auto expect = oracle::dense_pagerank(g, 0.85);
  EXPECT_GT(r.scores[0], r.scores[1]);
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(r.scores[i], expect[i], 1e-12);
}

TEST(DerivePagerank, ReportsNonConvergence) {
  PageRankOptions opts;
  opts.max_iterations = 1;
  const auto r = derive_pagerank(oracle::random_graph({40, 1, 0, 3.0, 2}), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
}

TEST(DerivePagerankProperty, SumsToOneAndMatchesDenseSolve) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = oracle::random_graph({60, 1, 0, 4.0, seed});
    const auto r = derive_pagerank(g);
    EXPECT_NEAR(std::accumulate(r.scores.begin(), r.scores.end(), 0.0), 1.0, 1e-10);
    const auto expect = oracle::dense_pagerank(g, 0.85);
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(r.scores[i], expect[i], 1e-9);
  }
}

TEST(DerivePagerankProperty, PermutationEquivariant) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = oracle::random_graph({20, 1, 0, 3.0, seed});
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    GraphBuilder b{g.schema()};
    for (NodeId i : perm) b.add_node(g.external_id(i), "", {g.value(i, 0)});
    for (NodeId i = 0; i < g.node_count(); ++i) {
      for (NodeId j : g.neighbors(i)) {
        if (i < j) b.add_edge(g.external_id(i), g.external_id(j));
      }
    }
    const auto h = std::move(b).build().graph;
    const auto rg = derive_pagerank(g).scores;
    const auto rh = derive_pagerank(h).scores;
    for (NodeId i = 0; i < g.node_count(); ++i) EXPECT_NEAR(rg[i], rh[h.require(g.external_id(i))], 1e-12);
  }
}

TEST(WithDerivedFeatures, AppendsInOrder) {
  const auto g = fixture::star(3);
  const auto d = with_derived_features(g, {"pagerank", "degree"});
  ASSERT_EQ(d.feature_count(), 3u);
  EXPECT_EQ(d.schema()[1].name, "pagerank");
  EXPECT_EQ(d.schema()[2].name, "degree");
  EXPECT_EQ(d.value(0, 2), 3.0);
  EXPECT_THROW(with_derived_features(g, {"betweenness"}), InvalidArgument);
  EXPECT_THROW(with_derived_features(d, {"degree"}), InvalidArgument);
}
