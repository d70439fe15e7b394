#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "toba/graph.hpp"

using namespace toba;

namespace {

Graph path3() {
  Graph g;
  g.num_nodes = 3;
  g.feature_dim = 2;
  g.num_classes = 2;
  g.edges = {{0, 1}, {1, 2}};
  g.features = Matrix{{0.5, 1.0}, {-2.0, 0.25}, {3.0, 0.0}};
  g.labels = {0, 1, 1};
  return g;
}

}  // namespace

TEST(Graph, ValidGraphPasses) { EXPECT_NO_THROW(path3().validate()); }

TEST(Graph, ValidateRejectsBrokenInvariants) {
  auto g = path3();
  g.edges = {{1, 1}};
  EXPECT_THROW(g.validate(), GraphError);

  g = path3();
  g.edges = {{0, 1}, {0, 1}};
  EXPECT_THROW(g.validate(), GraphError);

  g = path3();
  g.edges = {{0, 3}};
  EXPECT_THROW(g.validate(), GraphError);

  g = path3();
  g.labels = {0, 2, 1};
  EXPECT_THROW(g.validate(), GraphError);

  g = path3();
  g.labels = {0, 0, 0};  // class 1 empty
  EXPECT_THROW(g.validate(), GraphError);
}

TEST(Graph, CanonicalEdgesSortsAndOrients) {
  const auto e = canonical_edges({{2, 1}, {0, 2}, {1, 0}}, 3);
  EXPECT_EQ(e, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_THROW(canonical_edges({{0, 1}, {1, 0}}, 3), GraphError);
  EXPECT_THROW(canonical_edges({{2, 2}}, 3), GraphError);
}

TEST(Graph, NeighborListsAreSymmetric) {
  const auto adj = neighbor_lists(path3());
  EXPECT_EQ(adj[0], (std::vector<NodeId>{1}));
  EXPECT_EQ(adj[1], (std::vector<NodeId>{0, 2}));
  EXPECT_EQ(adj[2], (std::vector<NodeId>{1}));
  EXPECT_EQ(class_sizes(path3()), (std::vector<std::size_t>{1, 2}));
}

TEST(Sbm, DegenerateProbabilitiesGiveTwoCliques) {
  SbmParams p;
  p.block_sizes = {2, 2};
  p.p_intra = 1.0;
  p.p_inter = 0.0;
  const Graph g = generate_sbm(p, 3);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{0, 1}, {2, 3}}));
  EXPECT_EQ(g.labels, (std::vector<ClassId>{0, 0, 1, 1}));
}

TEST(Sbm, SeedDeterministicAndBlockConsistent) {
  SbmParams p;
  p.block_sizes = {5, 7, 3};
  p.p_intra = 0.4;
  p.p_inter = 0.1;
  p.feature_dim = 4;
  EXPECT_EQ(generate_sbm(p, 9), generate_sbm(p, 9));
  EXPECT_FALSE(generate_sbm(p, 9) == generate_sbm(p, 10));
  const Graph g = generate_sbm(p, 9);
  EXPECT_NO_THROW(g.validate());
  for (NodeId i = 0; i < 15; ++i) EXPECT_EQ(g.labels[i], i < 5 ? 0 : (i < 12 ? 1 : 2));
}

TEST(Sbm, IntraEdgeCountWithinFourSigmaOfBinomial) {
  SbmParams p;
  p.block_sizes = {50, 50};
  p.p_intra = 0.2;
  p.p_inter = 0.01;
  double intra = 0.0, inter = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = generate_sbm(p, seed);
    for (const auto& e : g.edges) (g.labels[e.u] == g.labels[e.v] ? intra : inter) += 1.0;
  }
  const double pairs_intra = 100.0 * 2.0 * (50.0 * 49.0 / 2.0);
  const double pairs_inter = 100.0 * 50.0 * 50.0;
  EXPECT_NEAR(intra, pairs_intra * 0.2, 4.0 * std::sqrt(pairs_intra * 0.2 * 0.8));
  EXPECT_NEAR(inter, pairs_inter * 0.01, 4.0 * std::sqrt(pairs_inter * 0.01 * 0.99));
}

TEST(Sbm, FeatureMeansFollowClassAxis) {
  SbmParams p;
  p.block_sizes = {2000, 2000};
  p.p_intra = 0.0;
  p.p_inter = 0.0;
  p.feature_dim = 3;
  p.feature_shift = 2.0;
  p.noise_sigma = 0.5;
  const Graph g = generate_sbm(p, 4);
  for (int c = 0; c < 2; ++c) {
    for (std::size_t a = 0; a < 3; ++a) {
      double sum = 0.0;
      for (NodeId i = 0; i < g.num_nodes; ++i)
        if (g.labels[i] == c) sum += g.features(i, a);
      const double expected = a == static_cast<std::size_t>(c) ? 2.0 : 0.0;
      EXPECT_NEAR(sum / 2000.0, expected, 4.0 * 0.5 / std::sqrt(2000.0));
    }
  }
}

TEST(Sbm, RejectsInvalidParams) {
  SbmParams p;
  p.block_sizes = {3, 3};
  p.p_intra = 0.1;
  p.p_inter = 0.2;
  EXPECT_THROW(generate_sbm(p, 0), GraphError);
  p.p_inter = 0.0;
  p.block_sizes = {3, 0};
  EXPECT_THROW(generate_sbm(p, 0), GraphError);
}
