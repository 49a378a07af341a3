#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "graphprobe/error.hpp"
#include "graphprobe/probes.hpp"
#include "support/fixtures.hpp"
#include "support/planted.hpp"

using namespace graphprobe;
using namespace graphprobe::testing;

namespace {

CentralityVector centrality_of(std::vector<double> values) {
  return CentralityVector{CentralityKind::eigenvector, std::move(values)};
}

ProbeConfig pairs_cfg(std::size_t sample, std::uint64_t seed = 0) {
  ProbeConfig cfg;
  cfg.pair_sample_size = sample;
  cfg.seed = seed;
  return cfg;
}

std::vector<PairLabel> all_pairs(const PairDataset& d) {
  std::vector<PairLabel> out = d.train;
  out.insert(out.end(), d.test.begin(), d.test.end());
  return out;
}

}  // namespace

TEST(PairDataset, TwoNodesCannotBeSplit) {
  // One unordered pair: both orientations must share a partition, so one side stays empty.
  EXPECT_THROW(build_pair_dataset(centrality_of({3.0, 1.0}), pairs_cfg(10)), ValidationError);
}

TEST(PairDataset, LabelsFollowComparison) {
  const CentralityVector c = centrality_of({3.0, 1.0, 2.0, 2.0, 0.5});
  const auto d = build_pair_dataset(c, pairs_cfg(20));
  EXPECT_TRUE(!d.clamped);
  const auto pairs = all_pairs(d);
  EXPECT_EQ(pairs.size(), 20u);
  for (const auto& p : pairs) {
    EXPECT_NE(p.i, p.j);
    EXPECT_EQ(p.label, c.values[p.i] >= c.values[p.j] ? 1 : 0);
  }
  const auto has = [&](NodeId i, NodeId j, std::uint8_t l) {
    return std::count(pairs.begin(), pairs.end(), PairLabel{i, j, l}) == 1;
  };
  EXPECT_TRUE(has(0, 1, 1));
  EXPECT_TRUE(has(1, 0, 0));
  EXPECT_TRUE(has(2, 3, 1));
  EXPECT_TRUE(has(3, 2, 1));
}

TEST(PairDataset, TiesGiveLabelOne) {
  const auto d = build_pair_dataset(centrality_of(std::vector<double>(6, 0.25)), pairs_cfg(30));
  for (const auto& p : all_pairs(d)) EXPECT_EQ(p.label, 1);
}

TEST(PairDataset, DeterministicAndDistinct) {
  Rng rng(1);
  std::vector<double> values(100);
  for (double& v : values) v = rng.uniform();
  const auto c = centrality_of(values);
  const auto a = build_pair_dataset(c, pairs_cfg(1000, 7));
  const auto b = build_pair_dataset(c, pairs_cfg(1000, 7));
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& p : all_pairs(a)) EXPECT_TRUE(seen.insert({p.i, p.j}).second);
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(build_pair_dataset(c, pairs_cfg(1000, 8)).train, a.train);
}

TEST(PairDataset, OrientationsShareAPartition) {
  const auto d = build_pair_dataset(centrality_of({1, 2, 3, 4, 5, 6}), pairs_cfg(30, 3));
  std::set<std::pair<NodeId, NodeId>> train;
  for (const auto& p : d.train) train.insert({std::min(p.i, p.j), std::max(p.i, p.j)});
  for (const auto& p : d.test) EXPECT_FALSE(train.contains({std::min(p.i, p.j), std::max(p.i, p.j)}));
  EXPECT_FALSE(d.test.empty());
}

TEST(PairDataset, NodeSplitKeepsNodesDisjoint) {
  Rng rng(5);
  std::vector<double> values(50);
  for (double& v : values) v = rng.uniform();
  ProbeConfig cfg = pairs_cfg(400, 2);
  cfg.pair_split = PairSplit::by_node;
  const auto d = build_pair_dataset(centrality_of(values), cfg);
  std::set<NodeId> train_nodes;
  for (const auto& p : d.train) {
    train_nodes.insert(p.i);
    train_nodes.insert(p.j);
  }
  for (const auto& p : d.test) {
    EXPECT_FALSE(train_nodes.contains(p.i));
    EXPECT_FALSE(train_nodes.contains(p.j));
    EXPECT_EQ(p.label, values[p.i] >= values[p.j] ? 1 : 0);
  }
  EXPECT_EQ(d.train.size(), 320u);
  EXPECT_EQ(d.test.size(), 80u);
  EXPECT_FALSE(d.clamped);
  const auto again = build_pair_dataset(centrality_of(values), cfg);
  EXPECT_EQ(again.train, d.train);
  EXPECT_EQ(again.test, d.test);
  // Ten held-out nodes offer only 90 ordered pairs.
  cfg.pair_sample_size = 1000;
  EXPECT_TRUE(build_pair_dataset(centrality_of(values), cfg).clamped);
  EXPECT_THROW(build_pair_dataset(centrality_of({1, 2, 3, 4}), cfg), ValidationError);
  EXPECT_EQ(parse_pair_split(to_string(PairSplit::by_node)), PairSplit::by_node);
  EXPECT_THROW(parse_pair_split("edge"), ValidationError);
}

TEST(PairDataset, ClampsToAvailablePairs) {
  const auto d = build_pair_dataset(centrality_of({1, 2, 3, 4}), pairs_cfg(50));
  EXPECT_TRUE(d.clamped);
  EXPECT_EQ(all_pairs(d).size(), 12u);
  EXPECT_EQ(default_pair_sample_size(300), 3000u);
  EXPECT_EQ(default_pair_sample_size(3), 6u);
}

TEST(PairDataset, Errors) {
  EXPECT_THROW(build_pair_dataset(centrality_of({1.0}), pairs_cfg(10)), ValidationError);
  EXPECT_THROW(build_pair_dataset(centrality_of({1, 2, 3}), pairs_cfg(5)), ValidationError);
  ProbeConfig cfg = pairs_cfg(10);
  cfg.train_fraction = 1.0;
  EXPECT_THROW(build_pair_dataset(centrality_of({1, 2, 3}), cfg), ValidationError);
}

TEST(CentralityProbe, SingleNodeIsAnError) {
  const Graph g(1, {});
  Rng rng(2);
  EXPECT_THROW(centrality_probe(g, gaussian_embeddings(1, 4, rng), CentralityKind::betweenness, ProbeConfig{},
                                TrainConfig{}),
               ValidationError);
  EXPECT_THROW(centrality_probe(path_graph(4), gaussian_embeddings(3, 4, rng), CentralityKind::betweenness,
                                ProbeConfig{}, TrainConfig{}),
               ValidationError);
}

TEST(CentralityProbe, PlantedBeatsRandom) {
  Rng rng(3);
  const Graph g = random_connected_gnp(80, 0.08, rng);
  const auto bc = betweenness_centrality(g);
  ProbeConfig cfg;
  cfg.probe_kind = ProbeKind::centrality_bc;
  cfg.pair_sample_size = 2000;
  cfg.seed = 4;
  TrainConfig tc;
  tc.learning_rate = 0.01;
  tc.epochs = 100;
  tc.batch_size = 64;
  tc.seed = 5;
  const auto planted = centrality_probe(g, centrality_embedding(bc, 8), CentralityKind::betweenness, cfg, tc);
  const auto random = centrality_probe(g, gaussian_embeddings(80, 8, rng), CentralityKind::betweenness, cfg, tc);
  EXPECT_GE(planted.score, 90.0);
  EXPECT_LT(random.score, planted.score);
  EXPECT_EQ(planted.metric_name, "accuracy");
  EXPECT_EQ(planted.probe_kind, ProbeKind::centrality_bc);
  for (const char* key : {"f1", "base_rate", "num_train", "num_test", "train_loss"}) {
    EXPECT_TRUE(planted.auxiliary.contains(key)) << key;
  }
  EXPECT_GE(planted.score, 0.0);
  EXPECT_LE(planted.score, 100.0);
}

TEST(CentralityProbe, InvariantUnderIncreasingTransformOfCentrality) {
  Rng rng(6);
  const Graph g = random_connected_gnp(30, 0.2, rng);
  const auto emb = gaussian_embeddings(30, 6, rng);
  auto c = eigenvector_centrality(g);
  ProbeConfig cfg;
  cfg.pair_sample_size = 300;
  cfg.seed = 1;
  TrainConfig tc;
  tc.epochs = 20;
  const auto base = centrality_probe(c, emb, cfg, tc);
  for (double& v : c.values) v = std::exp(5.0 * v) + std::pow(v, 3.0);
  const auto moved = centrality_probe(c, emb, cfg, tc);
  EXPECT_EQ(base.score, moved.score);
  EXPECT_EQ(base.auxiliary, moved.auxiliary);
}

TEST(CentralityProbe, Deterministic) {
  Rng rng(7);
  const Graph g = random_connected_gnp(25, 0.2, rng);
  const auto emb = gaussian_embeddings(25, 4, rng);
  ProbeConfig cfg;
  cfg.seed = 9;
  TrainConfig tc;
  tc.epochs = 10;
  const auto a = centrality_probe(g, emb, CentralityKind::eigenvector, cfg, tc);
  const auto b = centrality_probe(g, emb, CentralityKind::eigenvector, cfg, tc);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.auxiliary, b.auxiliary);
}

TEST(DistanceSplit, SizesAndDeterminism) {
  const auto table = shortest_paths_bounded(path_graph(10), 3);
  const auto s = split_distance_pairs(table, 0.8, 3);
  EXPECT_EQ(s.train.size() + s.test.size(), table.size());
  EXPECT_EQ(s.test.size(), static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(table.size()))));
  const auto again = split_distance_pairs(table, 0.8, 3);
  EXPECT_EQ(s.test.size(), again.test.size());
  for (std::size_t k = 0; k < s.test.size(); ++k) EXPECT_EQ(s.test[k].i, again.test[k].i);
  EXPECT_THROW(split_distance_pairs(shortest_paths_bounded(path_graph(2), 3), 0.8, 0), ValidationError);
}

TEST(DistanceProbe, ZeroMapScore) {
  Rng rng(8);
  const Graph g = random_tree(20, rng);
  const auto emb = gaussian_embeddings(20, 5, rng);
  ProbeConfig cfg;
  cfg.seed = 2;
  TrainConfig frozen;
  frozen.learning_rate = 0.0;
  frozen.epochs = 1;
  const auto s = distance_probe(g, emb, cfg, frozen, DistanceProbeParams::zeros(5, 5));
  const auto split = split_distance_pairs(shortest_paths_bounded(g, 3), 0.8, 2);
  double sum = 0.0;
  for (const auto& p : split.test) sum += p.distance;
  EXPECT_DOUBLE_EQ(s.score, 1.0 / (sum + kDistanceScoreEpsilon));
  EXPECT_GT(s.score, 0.0);
}

TEST(DistanceProbe, IdenticalRowsContributeTheirDistance) {
  Rng rng(9);
  Matrix m(4, 3);
  for (double& v : m.data()) v = rng.normal();
  for (std::size_t c = 0; c < 3; ++c) m(3, c) = m(0, c);
  const EmbeddingMatrix emb(m, "dup");
  const std::vector<DistancePair> pair{{0, 3, 3}};
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_EQ(distance_loss(DistanceProbeParams::random(2, 3, rng), emb, pair), 3.0);
  }
}

TEST(DistanceProbe, PlantedTreeBeatsRandom) {
  Rng rng(10);
  const Graph tree = random_tree(30, rng);
  const auto planted = tree_path_embedding(tree);
  const auto random = gaussian_embeddings(30, planted.dim(), rng);
  ProbeConfig cfg;
  cfg.probe_kind = ProbeKind::distance;
  cfg.seed = 1;
  TrainConfig tc;
  tc.seed = 1;
  const auto ps = distance_probe(tree, planted, cfg, tc);
  const auto rs = distance_probe(tree, random, cfg, tc);
  EXPECT_GE(ps.score, 1.5 * rs.score);
  // Starting from the identity, the planted rows already reproduce every distance.
  const auto exact = distance_probe(tree, planted, cfg, tc, DistanceProbeParams::identity(planted.dim()));
  EXPECT_EQ(exact.auxiliary.at("test_loss_sum"), 0.0);
  EXPECT_DOUBLE_EQ(exact.score, 1.0 / kDistanceScoreEpsilon);
  EXPECT_EQ(ps.metric_name, "distance_score");
  EXPECT_TRUE(ps.auxiliary.contains("test_loss_mean"));
  EXPECT_TRUE(ps.auxiliary.contains("train_loss_sum"));
}

TEST(DistanceProbe, Errors) {
  Rng rng(11);
  const Graph g(4, {});
  ProbeConfig cfg;
  EXPECT_THROW(distance_probe(g, gaussian_embeddings(4, 3, rng), cfg, TrainConfig{}), ValidationError);
  EXPECT_THROW(distance_probe(path_graph(5), gaussian_embeddings(4, 3, rng), cfg, TrainConfig{}), ValidationError);
  cfg.distance_cutoff = 0;
  EXPECT_THROW(distance_probe(path_graph(4), gaussian_embeddings(4, 3, rng), cfg, TrainConfig{}), ValidationError);
}

TEST(StructureComparison, PerfectAndReversedOrderings) {
  Rng rng(12);
  const std::size_t n = 8;
  Matrix s(n, n, 1.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) s(a, b) = s(b, a) = rng.uniform();
  }
  Matrix same(n, n);
  Matrix reversed(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      same(a, b) = std::exp(2.0 * s(a, b)) - 3.0;
      reversed(a, b) = -s(a, b);
    }
  }
  const auto up = compare_similarity_matrices(same, s);
  EXPECT_NEAR(up.mean, 1.0, 1e-12);
  EXPECT_EQ(up.undefined_anchors, 0u);
  EXPECT_NEAR(compare_similarity_matrices(reversed, s).mean, -1.0, 1e-12);
}

TEST(StructureComparison, ConstantRowCountsAsUndefined) {
  Matrix a(3, 3, 1.0);
  Matrix b(3, 3, 1.0);
  a(0, 1) = a(1, 0) = 0.2;
  a(0, 2) = a(2, 0) = 0.9;
  a(1, 2) = a(2, 1) = 0.4;
  b(0, 1) = b(1, 0) = 0.1;
  b(0, 2) = b(2, 0) = 0.5;
  b(1, 2) = b(2, 1) = 0.5;
  const auto cmp = compare_similarity_matrices(a, b);
  EXPECT_EQ(cmp.undefined_anchors, 1u);
  EXPECT_EQ(cmp.per_anchor[2], 0.0);
  EXPECT_THROW(compare_similarity_matrices(Matrix(2, 2), Matrix(2, 2)), ValidationError);
  EXPECT_THROW(compare_similarity_matrices(Matrix(3, 3), Matrix(4, 4)), ValidationError);
}

TEST(StructuralProbe, WlCountEmbeddingsScoreHigh) {
  Rng rng(13);
  const auto coll = mixed_collection(15, rng);
  const auto s = structural_probe(coll, wl_count_embeddings(coll, 3), ProbeConfig{});
  EXPECT_GE(s.score, 0.8);
  EXPECT_LE(s.score, 1.0);
  EXPECT_EQ(s.per_anchor.size(), 15u);
  EXPECT_EQ(s.metric_name, "structure_spearman");
}

TEST(StructuralProbe, InvariantToGraphOrder) {
  Rng rng(14);
  const auto coll = mixed_collection(12, rng);
  const auto embs = gaussian_collection_embeddings(coll, 5, rng);
  const auto base = structural_probe(coll, embs, ProbeConfig{});
  for (int trial = 0; trial < 5; ++trial) {
    const auto perm = random_permutation(coll.size(), rng);
    GraphCollection shuffled;
    std::vector<EmbeddingMatrix> moved;
    for (const NodeId k : perm) {
      shuffled.graphs.push_back(coll.graphs[k]);
      moved.push_back(embs[k]);
    }
    const auto s = structural_probe(shuffled, moved, ProbeConfig{});
    EXPECT_EQ(s.score, base.score);
    for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_EQ(s.per_anchor[k], base.per_anchor[perm[k]]);
  }
}

TEST(StructuralProbe, ZeroVectorIsFlagged) {
  Rng rng(15);
  const auto coll = mixed_collection(5, rng);
  auto embs = gaussian_collection_embeddings(coll, 3, rng);
  embs[2] = EmbeddingMatrix(Matrix(coll.graphs[2].num_nodes(), 3), "random");
  const auto s = structural_probe(coll, embs, ProbeConfig{});
  EXPECT_EQ(s.auxiliary.at("zero_vector_pairs"), 4.0);
  EXPECT_TRUE(std::isfinite(s.score));
}

TEST(StructuralProbe, Errors) {
  Rng rng(16);
  auto coll = mixed_collection(4, rng);
  auto embs = gaussian_collection_embeddings(coll, 3, rng);
  embs.pop_back();
  EXPECT_THROW(structural_probe(coll, embs, ProbeConfig{}), ValidationError);
  embs.push_back(gaussian_embeddings(coll.graphs[3].num_nodes() + 1, 3, rng));
  EXPECT_THROW(structural_probe(coll, embs, ProbeConfig{}), ValidationError);
  coll.graphs.resize(2);
  embs.resize(2);
  EXPECT_THROW(structural_probe(coll, embs, ProbeConfig{}), ValidationError);
}
