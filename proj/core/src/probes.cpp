#include "graphprobe/probes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "graphprobe/error.hpp"
#include "graphprobe/metrics.hpp"
#include "graphprobe/random.hpp"

namespace graphprobe {

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::centrality_ec:
      return "centrality-ec";
    case ProbeKind::centrality_bc:
      return "centrality-bc";
    case ProbeKind::distance:
      return "distance";
    case ProbeKind::structure:
      return "structure";
  }
  return "structure";
}

ProbeKind parse_probe_kind(const std::string& text) {
  for (const auto kind : {ProbeKind::centrality_ec, ProbeKind::centrality_bc, ProbeKind::distance,
                          ProbeKind::structure}) {
    if (text == to_string(kind)) return kind;
  }
  throw ValidationError("unknown probe kind '" + text + "'");
}

std::string to_string(PairSplit split) { return split == PairSplit::by_node ? "node" : "pair"; }

PairSplit parse_pair_split(const std::string& text) {
  if (text == "pair") return PairSplit::by_pair;
  if (text == "node") return PairSplit::by_node;
  throw ValidationError("unknown pair split '" + text + "' (expected pair or node)");
}

void ProbeConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ValidationError("train fraction must lie in (0, 1)");
  if (pair_sample_size && *pair_sample_size < 10) throw ValidationError("pair sample size must be at least 10");
  if (distance_cutoff < 1) throw ValidationError("distance cutoff must be at least 1");
  if (wl_iterations < 1) throw ValidationError("WL iterations must be at least 1");
  if (distance_rank && *distance_rank < 1) throw ValidationError("distance probe rank must be at least 1");
  if (hidden_dim && *hidden_dim < 1) throw ValidationError("hidden dimension must be at least 1");
}

std::size_t default_pair_sample_size(std::size_t num_nodes) {
  return std::min(10 * num_nodes, num_nodes * (num_nodes - 1));
}

namespace {

// Floyd's sampling of k distinct indices below total, returned sorted.
std::vector<std::uint64_t> sample_indices(std::uint64_t total, std::uint64_t k, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k);
  for (std::uint64_t j = total - k; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  std::vector<std::uint64_t> indices(chosen.begin(), chosen.end());
  std::sort(indices.begin(), indices.end());
  return indices;
}

// Ordered pairs over `nodes`, sampled without replacement and labelled.
std::vector<PairLabel> sample_pairs(const CentralityVector& centrality, const std::vector<NodeId>& nodes,
                                    std::uint64_t k, Rng& rng) {
  const std::uint64_t n = nodes.size();
  std::vector<PairLabel> out;
  out.reserve(k);
  for (const std::uint64_t p : sample_indices(n * (n - 1), k, rng)) {
    const auto a = p / (n - 1);
    const auto r = p % (n - 1);
    const NodeId i = nodes[a];
    const NodeId j = nodes[r < a ? r : r + 1];
    out.push_back({i, j, static_cast<std::uint8_t>(centrality.values[i] >= centrality.values[j] ? 1 : 0)});
  }
  return out;
}

void split_by_pair(const CentralityVector& centrality, const ProbeConfig& cfg, std::uint64_t k, Rng& rng,
                   PairDataset& data) {
  std::vector<NodeId> nodes(centrality.values.size());
  std::iota(nodes.begin(), nodes.end(), NodeId{0});

  // Group both orientations of an unordered pair so they share a partition.
  std::map<std::pair<NodeId, NodeId>, std::vector<PairLabel>> groups;
  for (const auto& p : sample_pairs(centrality, nodes, k, rng)) {
    groups[{std::min(p.i, p.j), std::max(p.i, p.j)}].push_back(p);
  }
  std::vector<const std::vector<PairLabel>*> order;
  order.reserve(groups.size());
  for (const auto& [key, members] : groups) order.push_back(&members);
  rng.shuffle(std::span(order));

  const auto target_train = static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(k)));
  for (const auto* members : order) {
    auto& dest = data.train.size() < target_train ? data.train : data.test;
    dest.insert(dest.end(), members->begin(), members->end());
  }
}

void split_by_node(const CentralityVector& centrality, const ProbeConfig& cfg, std::uint64_t k, Rng& rng,
                   PairDataset& data) {
  const std::size_t n = centrality.values.size();
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  rng.shuffle(std::span(nodes));
  const auto train_nodes = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n)));
  if (train_nodes < 2 || n - train_nodes < 2) {
    throw ValidationError("node split of " + std::to_string(n) + " nodes at train fraction " +
                          std::to_string(cfg.train_fraction) + " leaves a side with fewer than two nodes");
  }
  std::vector<NodeId> train(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(train_nodes));
  std::vector<NodeId> test(nodes.begin() + static_cast<std::ptrdiff_t>(train_nodes), nodes.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  const auto want_test = static_cast<std::uint64_t>(std::llround((1.0 - cfg.train_fraction) * static_cast<double>(k)));
  const std::uint64_t avail_train = static_cast<std::uint64_t>(train.size()) * (train.size() - 1);
  const std::uint64_t avail_test = static_cast<std::uint64_t>(test.size()) * (test.size() - 1);
  const std::uint64_t k_test = std::clamp<std::uint64_t>(want_test, 1, avail_test);
  const std::uint64_t k_train = std::clamp<std::uint64_t>(k - std::min(k, want_test), 1, avail_train);
  data.clamped = data.clamped || k_test < want_test || k_train < k - std::min(k, want_test);
  data.train = sample_pairs(centrality, train, k_train, rng);
  data.test = sample_pairs(centrality, test, k_test, rng);
}

}  // namespace

PairDataset build_pair_dataset(const CentralityVector& centrality, const ProbeConfig& cfg) {
  cfg.validate();
  const std::size_t n = centrality.values.size();
  if (n < 2) throw ValidationError("pair dataset needs at least two nodes");
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1);

  PairDataset data;
  data.requested = cfg.pair_sample_size.value_or(default_pair_sample_size(n));
  data.clamped = data.requested > total;
  const std::uint64_t k = std::min<std::uint64_t>(data.requested, total);

  Rng rng(cfg.seed);
  if (cfg.pair_split == PairSplit::by_pair) {
    split_by_pair(centrality, cfg, k, rng, data);
  } else {
    split_by_node(centrality, cfg, k, rng, data);
  }
  if (data.test.empty() || data.train.empty()) {
    throw ValidationError("train fraction " + std::to_string(cfg.train_fraction) + " leaves an empty partition for " +
                          std::to_string(k) + " pairs");
  }
  return data;
}

namespace {

Matrix concat_inputs(const EmbeddingMatrix& emb, const std::vector<PairLabel>& pairs) {
  const std::size_t d = emb.dim();
  Matrix x(pairs.size(), 2 * d);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto row = x.row(r);
    std::copy(emb.row(pairs[r].i).begin(), emb.row(pairs[r].i).end(), row.begin());
    std::copy(emb.row(pairs[r].j).begin(), emb.row(pairs[r].j).end(), row.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return x;
}

std::vector<std::uint8_t> labels_of(const std::vector<PairLabel>& pairs) {
  std::vector<std::uint8_t> labels;
  labels.reserve(pairs.size());
  for (const auto& p : pairs) labels.push_back(p.label);
  return labels;
}

}  // namespace

ProbeScore centrality_probe(const Graph& g, const EmbeddingMatrix& emb, CentralityKind kind, const ProbeConfig& cfg,
                            const TrainConfig& train_cfg) {
  if (emb.num_nodes() != g.num_nodes()) {
    throw ValidationError("embeddings cover " + std::to_string(emb.num_nodes()) + " nodes, graph has " +
                          std::to_string(g.num_nodes()));
  }
  if (g.num_nodes() < 2) throw ValidationError("centrality probe needs at least two nodes");
  const auto centrality = kind == CentralityKind::eigenvector ? eigenvector_centrality(g) : betweenness_centrality(g);
  return centrality_probe(centrality, emb, cfg, train_cfg);
}

ProbeScore centrality_probe(const CentralityVector& centrality, const EmbeddingMatrix& emb, const ProbeConfig& cfg,
                            const TrainConfig& train_cfg) {
  if (emb.num_nodes() != centrality.values.size()) {
    throw ValidationError("embeddings and centrality cover different node counts");
  }
  const auto data = build_pair_dataset(centrality, cfg);
  const Matrix train_x = concat_inputs(emb, data.train);
  const auto train_y = labels_of(data.train);
  const auto trained = train_mlp(train_x, train_y, train_cfg, cfg.hidden_dim.value_or(emb.dim()));

  auto predict = [&](const Matrix& x, std::vector<double>& probs, std::vector<std::uint8_t>& preds) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const double p = mlp_forward(trained.params, x.row(r));
      probs.push_back(p);
      preds.push_back(p >= 0.5 ? 1 : 0);
    }
  };
  const Matrix test_x = concat_inputs(emb, data.test);
  const auto test_y = labels_of(data.test);
  std::vector<double> test_p;
  std::vector<std::uint8_t> test_pred;
  predict(test_x, test_p, test_pred);
  std::vector<double> train_p;
  std::vector<std::uint8_t> train_pred;
  predict(train_x, train_p, train_pred);

  ProbeScore out;
  out.probe_kind =
      centrality.kind == CentralityKind::eigenvector ? ProbeKind::centrality_ec : ProbeKind::centrality_bc;
  out.metric_name = "accuracy";
  out.model_tag = emb.model_tag();
  out.score = accuracy(test_pred, test_y);
  out.auxiliary["f1"] = f1(test_pred, test_y);
  const auto positives = static_cast<std::size_t>(std::count(test_y.begin(), test_y.end(), std::uint8_t{1}));
  if (positives != 0 && positives != test_y.size()) out.auxiliary["auc"] = auc(test_p, test_y);
  out.auxiliary["base_rate"] = 100.0 * static_cast<double>(positives) / static_cast<double>(test_y.size());
  out.auxiliary["train_accuracy"] = accuracy(train_pred, train_y);
  out.auxiliary["train_loss"] = trained.epoch_losses.back();
  out.auxiliary["num_train"] = static_cast<double>(data.train.size());
  out.auxiliary["num_test"] = static_cast<double>(data.test.size());
  out.auxiliary["pairs_requested"] = static_cast<double>(data.requested);
  out.auxiliary["pairs_clamped"] = data.clamped ? 1.0 : 0.0;
  out.auxiliary["node_split"] = cfg.pair_split == PairSplit::by_node ? 1.0 : 0.0;
  out.auxiliary["hidden_dim"] = static_cast<double>(trained.params.hidden_dim());
  out.auxiliary["gradient_clipped"] = trained.clipped ? 1.0 : 0.0;
  return out;
}

DistanceSplit split_distance_pairs(const DistanceTable& table, double train_fraction, std::uint64_t seed) {
  if (table.size() < 2) throw ValidationError("distance probe needs at least two pairs within the cutoff");
  std::vector<DistancePair> shuffled = table.pairs;
  Rng rng(seed);
  rng.shuffle(std::span(shuffled));
  const auto n = shuffled.size();
  auto num_test = static_cast<std::size_t>(std::llround((1.0 - train_fraction) * static_cast<double>(n)));
  num_test = std::clamp<std::size_t>(num_test, 1, n - 1);
  auto by_nodes = [](const DistancePair& a, const DistancePair& b) { return std::pair{a.i, a.j} < std::pair{b.i, b.j}; };
  DistanceSplit split;
  split.train.assign(shuffled.begin(), shuffled.end() - static_cast<std::ptrdiff_t>(num_test));
  split.test.assign(shuffled.end() - static_cast<std::ptrdiff_t>(num_test), shuffled.end());
  std::sort(split.train.begin(), split.train.end(), by_nodes);
  std::sort(split.test.begin(), split.test.end(), by_nodes);
  return split;
}

ProbeScore distance_probe(const Graph& g, const EmbeddingMatrix& emb, const ProbeConfig& cfg,
                          const TrainConfig& train_cfg, std::optional<DistanceProbeParams> init) {
  cfg.validate();
  if (emb.num_nodes() != g.num_nodes()) {
    throw ValidationError("embeddings cover " + std::to_string(emb.num_nodes()) + " nodes, graph has " +
                          std::to_string(g.num_nodes()));
  }
  const auto table = shortest_paths_bounded(g, cfg.distance_cutoff);
  if (table.empty()) throw ValidationError("no node pairs within distance " + std::to_string(cfg.distance_cutoff));
  const auto split = split_distance_pairs(table, cfg.train_fraction, cfg.seed);
  const std::size_t rank = cfg.distance_rank.value_or(emb.dim());
  const auto trained = train_distance_probe(emb, split.train, rank, train_cfg, std::move(init));

  const double test_sum = distance_loss(trained.params, emb, split.test);
  const double train_sum = distance_loss(trained.params, emb, split.train);
  const double test_mean = test_sum / static_cast<double>(split.test.size());

  ProbeScore out;
  out.probe_kind = ProbeKind::distance;
  out.metric_name = "distance_score";
  out.model_tag = emb.model_tag();
  out.score = 1.0 / (test_sum + kDistanceScoreEpsilon);
  out.auxiliary["test_loss_sum"] = test_sum;
  out.auxiliary["test_loss_mean"] = test_mean;
  out.auxiliary["score_mean"] = 1.0 / (test_mean + kDistanceScoreEpsilon);
  out.auxiliary["train_loss_sum"] = train_sum;
  out.auxiliary["train_loss_mean"] = train_sum / static_cast<double>(split.train.size());
  out.auxiliary["train_score"] = 1.0 / (train_sum + kDistanceScoreEpsilon);
  out.auxiliary["num_train"] = static_cast<double>(split.train.size());
  out.auxiliary["num_test"] = static_cast<double>(split.test.size());
  out.auxiliary["cutoff"] = static_cast<double>(cfg.distance_cutoff);
  out.auxiliary["rank"] = static_cast<double>(rank);
  out.auxiliary["gradient_clipped"] = trained.clipped ? 1.0 : 0.0;
  return out;
}

StructureComparison compare_similarity_matrices(const Matrix& embedding_similarity,
                                                const Matrix& structural_similarity) {
  const std::size_t n = embedding_similarity.rows();
  if (embedding_similarity.cols() != n || structural_similarity.rows() != n || structural_similarity.cols() != n) {
    throw ValidationError("similarity matrices must be square and of equal size");
  }
  if (n < 3) throw ValidationError("structural comparison needs at least three graphs");
  StructureComparison out;
  out.per_anchor.resize(n, 0.0);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t m = 0; m < n; ++m) {
    x.clear();
    y.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      x.push_back(embedding_similarity(m, k));
      y.push_back(structural_similarity(m, k));
    }
    if (is_constant(x) || is_constant(y)) {
      ++out.undefined_anchors;
      continue;
    }
    out.per_anchor[m] = spearman(x, y);
  }
  // Summing in sorted order makes the mean independent of graph order.
  std::vector<double> sorted = out.per_anchor;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (const double v : sorted) total += v;
  out.mean = total / static_cast<double>(n);
  return out;
}

ProbeScore structural_probe(const GraphCollection& collection, const std::vector<EmbeddingMatrix>& embeddings,
                            const ProbeConfig& cfg) {
  cfg.validate();
  const std::size_t n = collection.size();
  if (embeddings.size() != n) {
    throw ValidationError("expected one embedding matrix per graph: " + std::to_string(n) + " graphs, " +
                          std::to_string(embeddings.size()) + " matrices");
  }
  if (n < 3) throw ValidationError("structural probe needs at least three graphs");
  for (std::size_t m = 0; m < n; ++m) {
    if (embeddings[m].num_nodes() != collection.graphs[m].num_nodes()) {
      throw ValidationError("embedding for graph " + std::to_string(m) + " covers " +
                            std::to_string(embeddings[m].num_nodes()) + " nodes, graph has " +
                            std::to_string(collection.graphs[m].num_nodes()));
    }
    if (embeddings[m].dim() != embeddings.front().dim()) {
      throw ValidationError("embedding for graph " + std::to_string(m) + " has a different dimension");
    }
  }

  std::vector<GraphEmbedding> pooled;
  pooled.reserve(n);
  for (std::size_t m = 0; m < n; ++m) pooled.push_back(readout(embeddings[m], cfg.readout_mode, m));

  WlLabelTable table;
  std::vector<WlLabelBag> bags;
  bags.reserve(n);
  for (const auto& g : collection.graphs) bags.push_back(wl_relabel(g, cfg.wl_iterations, table));

  Matrix cosine(n, n, 1.0);
  Matrix jaccard(n, n, 1.0);
  std::size_t degenerate = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto c = cosine_similarity(pooled[a].vector, pooled[b].vector);
      degenerate += c.degenerate ? 1 : 0;
      cosine(a, b) = cosine(b, a) = c.value;
      jaccard(a, b) = jaccard(b, a) = wl_jaccard(bags[a], bags[b], cfg.jaccard_mode);
    }
  }
  const auto cmp = compare_similarity_matrices(cosine, jaccard);

  ProbeScore out;
  out.probe_kind = ProbeKind::structure;
  out.metric_name = "structure_spearman";
  out.model_tag = embeddings.front().model_tag();
  out.score = cmp.mean;
  out.per_anchor = cmp.per_anchor;
  out.auxiliary["num_graphs"] = static_cast<double>(n);
  out.auxiliary["undefined_anchors"] = static_cast<double>(cmp.undefined_anchors);
  out.auxiliary["zero_vector_pairs"] = static_cast<double>(degenerate);
  out.auxiliary["wl_iterations"] = static_cast<double>(cfg.wl_iterations);
  out.auxiliary["wl_vocabulary"] = static_cast<double>(table.size());
  return out;
}

}  // namespace graphprobe
