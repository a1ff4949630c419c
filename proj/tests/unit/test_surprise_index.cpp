#include <gtest/gtest.h>

#include "explorank/binning.hpp"
#include "explorank/error.hpp"
#include "explorank/surprise_index.hpp"
#include "oracles.hpp"

using namespace explorank;

namespace {

AttributedGraph balanced_cycle() {
  GraphBuilder b{GraphSchema({{"g", FeatureKind::categorical}})};
  const char* values[] = {"x", "x", "y", "y"};
  for (int i = 0; i < 4; ++i) b.add_node("v" + std::to_string(i), "", {std::string(values[i])});
  for (int i = 0; i < 4; ++i) b.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % 4));
  return std::move(b).build().graph;
}

}  // namespace

TEST(SurpriseIndex, NeighborhoodEqualToGlobalIsZero) {
  const auto g = balanced_cycle();
  const auto index = SurpriseIndex::build(g, build_binnings(g), {1.0});
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(index.surprise(v), 0.0);
}

TEST(SurpriseIndex, PointMassNeighborhood) {
  GraphBuilder b{GraphSchema({{"g", FeatureKind::categorical}})};
  b.add_node("hub", "", {std::string("x")});
  for (int i = 0; i < 3; ++i) {
    b.add_node("y" + std::to_string(i), "", {std::string("y")});
    b.add_edge("hub", "y" + std::to_string(i));
  }
  const auto g = std::move(b).build().graph;
  const auto index = SurpriseIndex::build(g, build_binnings(g), {1.0});
  // Leaves see (1, 0) against the global (1/4, 3/4).
  EXPECT_NEAR(index.surprise(g.require("y0")), oracle::js({1.0, 0.0}, {0.25, 0.75}), 1e-15);
  EXPECT_NEAR(index.surprise(g.require("hub")), oracle::js({0.0, 1.0}, {0.25, 0.75}), 1e-15);
}

TEST(SurpriseIndex, MatchesOracleOnRandomGraph) {
  const auto g = oracle::random_graph({100, 3, 1, 5.0, 42});
  const auto binnings = build_binnings(g);
  const std::vector<double> lambda{1.0, 0.5, 2.0, 0.25};
  const auto index = SurpriseIndex::build(g, binnings, lambda);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double total = 0.0;
    for (std::size_t j = 0; j < g.feature_count(); ++j) {
      const double s = oracle::surprise(g, binnings, v, j);
      ASSERT_NEAR(index.feature_surprise(v, j), s, 1e-12);
      EXPECT_GE(index.feature_surprise(v, j), 0.0);
      EXPECT_LE(index.feature_surprise(v, j), 1.0);
      total += lambda[j] * index.feature_surprise(v, j);
    }
    EXPECT_NEAR(index.surprise(v), total, 1e-12);
  }
  EXPECT_EQ(index.lambda(), lambda);
  EXPECT_EQ(index.graph_fingerprint(), g.fingerprint());
}

TEST(SurpriseIndex, ThreadCountDoesNotChangeResults) {
  const auto g = oracle::random_graph({400, 3, 1, 6.0, 5});
  SurpriseIndexOptions one, four;
  four.threads = 4;
  const auto a = SurpriseIndex::build(g, build_binnings(g), std::vector<double>(4, 1.0), one);
  const auto b = SurpriseIndex::build(g, build_binnings(g), std::vector<double>(4, 1.0), four);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (std::size_t j = 0; j < 4; ++j) ASSERT_EQ(a.feature_surprise(v, j), b.feature_surprise(v, j));
  }
}

TEST(SurpriseIndex, LocalStorageOptional) {
  const auto g = oracle::random_graph({50, 2, 0, 4.0, 8});
  SurpriseIndexOptions opts;
  opts.store_local = false;
  const auto lean = SurpriseIndex::build(g, build_binnings(g), {1.0, 1.0}, opts);
  const auto full = SurpriseIndex::build(g, build_binnings(g), {1.0, 1.0});
  EXPECT_FALSE(lean.has_local());
  EXPECT_TRUE(full.has_local());
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(lean.surprise(v), full.surprise(v));
}

TEST(SurpriseIndex, RejectsMismatchedInputs) {
  const auto g = oracle::random_graph({50, 2, 0, 4.0, 8});
  auto binnings = build_binnings(g);
  EXPECT_THROW(SurpriseIndex::build(g, {binnings[0]}, {1.0}), IndexMismatch);
  EXPECT_THROW(SurpriseIndex::build(g, {binnings[1], binnings[0]}, {1.0, 1.0}), IndexMismatch);
  EXPECT_THROW(SurpriseIndex::build(g, {binnings[0], Binning::numerical(1, {100.0, 200.0})}, {1.0, 1.0}),
               IndexMismatch);
  EXPECT_THROW(SurpriseIndex::build(g, binnings, {1.0}), InvalidArgument);
  EXPECT_THROW(SurpriseIndex::build(g, binnings, {-1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(SurpriseIndex::build(g, binnings, {0.0, 0.0}), InvalidArgument);

  const auto index = SurpriseIndex::build(g, binnings, {1.0, 1.0});
  EXPECT_NO_THROW(index.validate_against(g));
  EXPECT_THROW(index.validate_against(oracle::random_graph({50, 2, 0, 4.0, 9})), IndexMismatch);
}
