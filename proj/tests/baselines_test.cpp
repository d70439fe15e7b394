#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "toba/baselines.hpp"

using namespace toba;

namespace {

// Two classes: 0..n0-1 are class 0, the rest class 1, on a ring.
Graph two_class_ring(std::size_t n0, std::size_t n1, std::uint64_t seed) {
  Graph g = fixtures::random_graph(n0 + n1, 3, 2, 0.0, seed);
  for (NodeId i = 0; i < g.num_nodes; ++i) g.labels[i] = i < n0 ? 0 : 1;
  for (NodeId i = 0; i + 1 < g.num_nodes; ++i) g.edges.push_back({i, i + 1});
  g.edges.push_back({0, g.num_nodes - 1});
  g.edges = canonical_edges(g.edges, g.num_nodes);
  return g;
}

std::vector<NodeId> neighbors_of(const std::vector<Edge>& edges, NodeId node) {
  std::vector<NodeId> out;
  for (const auto& e : edges) {
    if (e.u == node) out.push_back(e.v);
    if (e.v == node) out.push_back(e.u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Reweight, Examples) {
  const Graph g = two_class_ring(30, 30, 1);
  auto w = class_reweight(fixtures::split_with_counts(g, {20, 20}));
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 1.0);
  w = class_reweight(fixtures::split_with_counts(g, {20, 2}));
  EXPECT_DOUBLE_EQ(w[0], 0.55);
  EXPECT_DOUBLE_EQ(w[1], 5.5);
  EXPECT_DOUBLE_EQ(w[1] / w[0], 10.0);
}

TEST(Reweight, PositiveAndMeanOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::size_t m = 2 + rng.index(5);
    Graph g = fixtures::random_graph(40 * m, 1, m, 0.0, seed);
    for (NodeId i = 0; i < g.num_nodes; ++i) g.labels[i] = static_cast<ClassId>(i % m);
    std::vector<std::size_t> counts(m);
    for (auto& c : counts) c = 1 + rng.index(30);
    const Split s = fixtures::split_with_counts(g, counts);
    const auto w = class_reweight(s);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      EXPECT_GT(w[j], 0.0);
      num += w[j] * s.train_counts[j];
      den += s.train_counts[j];
    }
    EXPECT_NEAR(num / den, 1.0, 1e-12);
  }
}

TEST(Oversample, BalancedSplitIsEmpty) {
  const Graph g = two_class_ring(30, 30, 2);
  EXPECT_EQ(oversample(g, fixtures::split_with_counts(g, {10, 10}), 1).size(), 0u);
  EXPECT_EQ(smote(g, fixtures::split_with_counts(g, {10, 10}), 5, 1).size(), 0u);
}

TEST(Oversample, ReplicatesMinorityWithEdges) {
  const Graph g = two_class_ring(30, 30, 3);
  const Split s = fixtures::split_with_counts(g, {20, 2});
  const auto aug = oversample(g, s, 7);
  ASSERT_EQ(aug.size(), 18u);
  for (std::size_t k = 0; k < aug.size(); ++k) {
    EXPECT_EQ(aug.labels[k], 1);
    const NodeId seed = aug.seeds[k];
    EXPECT_TRUE(seed == 30 || seed == 31);  // the two class-1 training nodes
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(aug.features(k, c), g.features(seed, c));
    EXPECT_EQ(neighbors_of(aug.edges, g.num_nodes + k), neighbors_of(g.edges, seed));
  }
  EXPECT_EQ(aug.extended_train.size(), 40u);
  const auto ext = apply_augmentation(g, s, aug);
  EXPECT_NO_THROW(ext.graph.validate());
  EXPECT_EQ(ext.split.train_counts, (std::vector<std::size_t>{20, 20}));
  EXPECT_EQ(ext.split.test, s.test);
  EXPECT_EQ(ext.split.val, s.val);
}

TEST(Smote, InterpolationEndpoints) {
  const std::vector<double> a = {1.0, -2.0}, b = {3.0, 5.0};
  EXPECT_EQ(smote_interpolate(a, b, 0.0), a);
  EXPECT_EQ(smote_interpolate(a, b, 1.0), b);
  const std::vector<double> lo = {0.0, 0.0}, hi = {1.0, 1.0};
  for (double d : {0.1, 0.37, 0.9}) {
    const auto v = smote_interpolate(lo, hi, d);
    EXPECT_GE(v[0], 0.0);
    EXPECT_LE(v[0], 1.0);
    EXPECT_EQ(v[0], v[1]);
  }
}

TEST(Smote, SyntheticNodesStayOnSegmentsBetweenClassmates) {
  const Graph g = two_class_ring(40, 40, 4);
  const Split s = fixtures::split_with_counts(g, {20, 5});
  const auto aug = smote(g, s, 5, 3);
  ASSERT_EQ(aug.size(), 15u);
  std::vector<NodeId> minority;
  for (NodeId i : s.train)
    if (g.labels[i] == 1) minority.push_back(i);
  for (std::size_t k = 0; k < aug.size(); ++k) {
    EXPECT_EQ(aug.labels[k], 1);
    const NodeId seed = aug.seeds[k];
    EXPECT_TRUE(std::find(minority.begin(), minority.end(), seed) != minority.end());
    EXPECT_EQ(neighbors_of(aug.edges, g.num_nodes + k), neighbors_of(g.edges, seed));
    // Some classmate q has the synthetic point on segment [seed, q].
    bool on_segment = false;
    for (NodeId q : minority) {
      if (q == seed) continue;
      const double dx = g.features(q, 0) - g.features(seed, 0);
      if (dx == 0.0) continue;
      const double t = (aug.features(k, 0) - g.features(seed, 0)) / dx;
      if (t < -1e-12 || t > 1 + 1e-12) continue;
      bool all = true;
      for (std::size_t c = 0; c < 3; ++c) {
        const double expect = g.features(seed, c) + t * (g.features(q, c) - g.features(seed, c));
        all = all && std::abs(expect - aug.features(k, c)) < 1e-9;
      }
      on_segment = on_segment || all;
    }
    EXPECT_TRUE(on_segment) << "synthetic node " << k;
  }
  const auto ext = apply_augmentation(g, s, aug);
  EXPECT_EQ(ext.split.train_counts, (std::vector<std::size_t>{20, 20}));
}

TEST(Smote, SingleNodeClassFallsBackToReplication) {
  const Graph g = two_class_ring(30, 30, 5);
  const Split s = fixtures::split_with_counts(g, {10, 1});
  const auto aug = smote(g, s, 5, 1);
  ASSERT_EQ(aug.size(), 9u);
  for (std::size_t k = 0; k < aug.size(); ++k)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(aug.features(k, c), g.features(30, c));
}

TEST(Smote, Deterministic) {
  const Graph g = two_class_ring(40, 40, 6);
  const Split s = fixtures::split_with_counts(g, {20, 4});
  EXPECT_EQ(smote(g, s, 5, 9).features, smote(g, s, 5, 9).features);
  EXPECT_EQ(oversample(g, s, 9).seeds, oversample(g, s, 9).seeds);
}
