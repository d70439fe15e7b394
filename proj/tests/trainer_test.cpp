#include <gtest/gtest.h>

#include "support.hpp"
#include "toba/propagation.hpp"
#include "toba/trainer.hpp"

using namespace toba;

namespace {

Graph separable_sbm() {
  SbmParams p;
  p.block_sizes = {100, 100};
  p.p_intra = 0.1;
  p.p_inter = 0.01;
  p.feature_dim = 8;
  p.feature_shift = 3.0;
  p.noise_sigma = 0.5;
  return generate_sbm(p, 17);
}

Graph three_class_sbm() {
  SbmParams p;
  p.block_sizes = {80, 80, 80};
  p.p_intra = 0.05;
  p.p_inter = 0.005;
  p.feature_dim = 8;
  p.feature_shift = 1.0;
  p.noise_sigma = 1.0;
  return generate_sbm(p, 5);
}

TrainConfig short_config(const char* method, std::size_t epochs = 60) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.hidden = 16;
  cfg.method = Method::parse(method);
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST(Method, ParseAndName) {
  EXPECT_EQ(Method::parse("vanilla").name(), "vanilla");
  EXPECT_EQ(Method::parse("toba_t").name(), "vanilla+toba_t");
  EXPECT_EQ(Method::parse("reweight+toba_p").name(), "reweight+toba_p");
  EXPECT_EQ(Method::parse("smote+none").name(), "smote");
  EXPECT_TRUE(Method::parse("oversample+toba_t").uses_toba());
  EXPECT_THROW(Method::parse("graphens"), std::invalid_argument);
  EXPECT_THROW(Method::parse("vanilla+toba_x"), std::invalid_argument);
}

TEST(TrainConfig, RejectsInvalidValues) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  for (auto mutate : std::vector<void (*)(TrainConfig&)>{
           [](TrainConfig& c) { c.lr = 0.0; }, [](TrainConfig& c) { c.dropout = 1.0; },
           [](TrainConfig& c) { c.granularity = 0; }, [](TrainConfig& c) { c.lr_factor = 1.0; },
           [](TrainConfig& c) { c.epochs = 0; }}) {
    TrainConfig bad;
    mutate(bad);
    EXPECT_THROW(bad.validate(), std::invalid_argument);
  }
}

TEST(Train, VanillaSeparatesSeparableSbm) {
  const Graph g = separable_sbm();
  const Split s = make_step_imbalance_split(g, 20, 1, 1);
  TrainConfig cfg = short_config("vanilla", 300);
  cfg.hidden = 64;
  const auto r = train(g, s, cfg);
  EXPECT_GE(r.metrics.bacc, 0.95);
  EXPECT_EQ(r.history.size(), 300u);
}

TEST(Train, LossMonotoneWithoutDropout) {
  const Graph g = separable_sbm();
  const Split s = make_step_imbalance_split(g, 20, 1, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TrainConfig cfg = short_config("vanilla", 10);
    cfg.dropout = 0.0;
    cfg.seed = seed;
    const auto r = train(g, s, cfg);
    for (std::size_t e = 1; e < 10; ++e) {
      EXPECT_LE(r.history[e].train_loss, r.history[e - 1].train_loss) << "seed " << seed;
    }
  }
}

TEST(Train, IdenticalRunsHaveBitIdenticalHistory) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  for (const char* m : {"vanilla", "toba_t", "smote+toba_p", "reweight"}) {
    const auto a = train(g, s, short_config(m));
    const auto b = train(g, s, short_config(m));
    EXPECT_EQ(a.history, b.history) << m;
    EXPECT_EQ(a.params.w1, b.params.w1) << m;
  }
}

TEST(Train, ZeroRiskTobaMatchesVanillaExactly) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  const auto vanilla = train(g, s, short_config("vanilla"));
  for (const char* m : {"toba_p", "toba_t"}) {
    TrainConfig cfg = short_config(m);
    cfg.force_zero_risk = true;
    const auto toba = train(g, s, cfg);
    ASSERT_EQ(toba.history.size(), vanilla.history.size());
    for (std::size_t e = 0; e < toba.history.size(); ++e) {
      EXPECT_EQ(toba.history[e].train_loss, vanilla.history[e].train_loss) << m << " epoch " << e;
      EXPECT_EQ(toba.history[e].val_loss, vanilla.history[e].val_loss) << m << " epoch " << e;
      EXPECT_EQ(toba.history[e].virtual_edges, 0u);
    }
    EXPECT_EQ(toba.params.w1, vanilla.params.w1);
    EXPECT_EQ(toba.predictions.preds, vanilla.predictions.preds);
  }
}

TEST(Train, PredictionsComeFromTheOriginalGraph) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  for (const char* m : {"toba_t", "oversample", "smote+toba_t"}) {
    const auto r = train(g, s, short_config(m));
    ASSERT_EQ(r.predictions.num_nodes(), g.num_nodes) << m;
    const auto direct = gcn_forward(r.params, normalize_adjacency(g), g.features);
    EXPECT_EQ(r.predictions.probs, direct.probs) << m;
  }
}

TEST(Train, TobaAddsVirtualEdges) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  const auto r = train(g, s, short_config("toba_t"));
  std::size_t edges = 0;
  for (const auto& h : r.history) edges += h.virtual_edges;
  EXPECT_GT(edges, 0u);
  EXPECT_GT(r.metrics.virtual_edge_ratio, 0.0);
  EXPECT_EQ(r.augment_invocations, 60u);
}

TEST(Train, GranularityControlsInvocationCount) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  for (const std::size_t gran : {1u, 7u, 25u, 60u, 100u}) {
    TrainConfig cfg = short_config("toba_p");
    cfg.granularity = gran;
    const auto r = train(g, s, cfg);
    EXPECT_EQ(r.augment_invocations, (60 + gran - 1) / gran) << gran;
    for (const auto& h : r.history) EXPECT_EQ(h.augmented, h.epoch % gran == 0);
  }
}

TEST(Train, BaselinesProduceSyntheticNodes) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  EXPECT_EQ(train(g, s, short_config("oversample")).synthetic_nodes, 18u);
  EXPECT_EQ(train(g, s, short_config("smote")).synthetic_nodes, 18u);
  EXPECT_EQ(train(g, s, short_config("reweight")).synthetic_nodes, 0u);
}

TEST(Train, VirtualNodesInLossChangesTraining) {
  const Graph g = three_class_sbm();
  const Split s = make_step_imbalance_split(g, 20, 10, 2);
  TrainConfig cfg = short_config("toba_t");
  const auto excluded = train(g, s, cfg);
  cfg.virtual_in_loss = true;
  const auto included = train(g, s, cfg);
  EXPECT_NE(excluded.history.back().train_loss, included.history.back().train_loss);
}

TEST(Train, LearningRateHalvesOnPlateau) {
  const Graph g = separable_sbm();
  const Split s = make_step_imbalance_split(g, 20, 1, 1);
  TrainConfig cfg = short_config("vanilla", 400);
  cfg.patience = 5;
  const auto r = train(g, s, cfg);
  EXPECT_EQ(r.history.front().lr, cfg.lr);
  EXPECT_LT(r.history.back().lr, cfg.lr);
}
