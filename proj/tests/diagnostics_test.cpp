#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "support.hpp"
#include "toba/diagnostics.hpp"

using namespace toba;

namespace {

// Hop distances via repeated relaxation over the dense adjacency matrix
// (Floyd-Warshall), independent of the BFS code.
std::vector<std::vector<std::size_t>> all_pairs(const Graph& g) {
  const std::size_t n = g.num_nodes, inf = kUnreachable;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] != inf && d[k][j] != inf) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST(Heterophily, Examples) {
  Graph g = fixtures::random_graph(5, 1, 2, 0.0, 1);
  g.edges = {{0, 1}, {0, 2}, {0, 3}};
  g.labels = {0, 0, 0, 1, 1};
  const auto r = heterophilic_ratio(g, g.labels);
  EXPECT_DOUBLE_EQ(r[0], 1.0 / 3.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(r[3], 1.0);
  EXPECT_EQ(r[4], 0.0);  // isolated
}

TEST(Heterophily, PureHomophilySbmIsZero) {
  SbmParams p;
  p.block_sizes = {30, 30, 30};
  p.p_intra = 0.2;
  p.p_inter = 0.0;
  const Graph g = generate_sbm(p, 3);
  for (double v : heterophilic_ratio(g, g.labels)) EXPECT_EQ(v, 0.0);
}

TEST(Distance, Examples) {
  Graph g = fixtures::random_graph(6, 1, 2, 0.0, 1);
  g.edges = {{0, 1}, {1, 2}, {4, 5}};
  g.labels = {0, 0, 0, 1, 1, 1};
  const std::vector<NodeId> train = {0, 3};
  const auto d = distance_to_same_class_supervision(g, g.labels, train);
  EXPECT_EQ(d[0], 0u);
  EXPECT_EQ(d[1], 1u);
  EXPECT_EQ(d[2], 2u);
  EXPECT_EQ(d[3], 0u);
  EXPECT_EQ(d[4], kUnreachable);
  EXPECT_EQ(d[5], kUnreachable);
}

TEST(Distance, MatchesAllPairsOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 10 + seed % 41;
    const Graph g = fixtures::random_graph(n, 1, 3, 2.0 / n, seed);
    Rng rng(seed);
    std::vector<NodeId> train;
    for (NodeId i = 0; i < n; ++i)
      if (rng.bernoulli(0.15)) train.push_back(i);
    if (train.empty()) train.push_back(0);
    const auto d = distance_to_same_class_supervision(g, g.labels, train);
    const auto ap = all_pairs(g);
    for (NodeId i = 0; i < n; ++i) {
      std::size_t best = kUnreachable;
      for (NodeId t : train)
        if (g.labels[t] == g.labels[i]) best = std::min(best, ap[i][t]);
      EXPECT_EQ(d[i], best) << "seed " << seed << " node " << i;
    }
  }
}

TEST(Binning, Examples) {
  const std::vector<double> scores = {0.3, 0.1, 0.2, 0.4};
  const std::vector<int> correct = {1, 0, 1, 1};
  const auto one = binned_accuracy(scores, correct, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0].accuracy, 0.75);
  EXPECT_DOUBLE_EQ(one[0].center, 0.25);

  const std::vector<int> ones(4, 1);
  for (const auto& b : binned_accuracy(scores, ones, 3)) {
    EXPECT_EQ(b.accuracy, 1.0);
    EXPECT_EQ(b.stddev, 0.0);
  }
  EXPECT_THROW(binned_accuracy(scores, correct, 5), std::invalid_argument);
  EXPECT_THROW(binned_accuracy(scores, ones, 0), std::invalid_argument);
}

TEST(Binning, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const std::size_t n = 5 + rng.index(200), w = 1 + rng.index(std::min<std::size_t>(n, 12));
    std::vector<double> scores(n);
    std::vector<int> correct(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.index(10)) / 10.0;  // plenty of ties
      correct[i] = rng.bernoulli(0.6) ? 1 : 0;
    }
    // Oracle: pair up, stable sort, cut at floor(b*n/w).
    std::vector<std::pair<double, std::size_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i) keyed[i] = {scores[i], i};
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto bins = binned_accuracy(scores, correct, w);
    ASSERT_EQ(bins.size(), w);
    std::size_t total = 0;
    for (std::size_t b = 0; b < w; ++b) {
      const std::size_t lo = b * n / w, hi = (b + 1) * n / w;
      double s = 0.0, a = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        s += keyed[k].first;
        a += correct[keyed[k].second];
      }
      const double cnt = static_cast<double>(hi - lo);
      double var = 0.0;
      for (std::size_t k = lo; k < hi; ++k) var += std::pow(correct[keyed[k].second] - a / cnt, 2);
      EXPECT_EQ(bins[b].count, hi - lo);
      EXPECT_NEAR(bins[b].center, s / cnt, 1e-12);
      EXPECT_NEAR(bins[b].accuracy, a / cnt, 1e-12);
      EXPECT_NEAR(bins[b].stddev, std::sqrt(var / cnt), 1e-12);
      total += bins[b].count;
    }
    EXPECT_EQ(total, n);
  }
}

TEST(Binning, CsvHasHeaderAndOneLinePerBin) {
  const std::vector<double> scores = {0.1, 0.2};
  const std::vector<int> correct = {1, 0};
  std::ostringstream os;
  write_bins_csv(os, binned_accuracy(scores, correct, 2));
  EXPECT_EQ(os.str(), "center,accuracy,std,count\n0.1,1,0,1\n0.2,0,0,1\n");
}
