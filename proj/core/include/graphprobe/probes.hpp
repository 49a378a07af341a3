#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphprobe/algorithms.hpp"
#include "graphprobe/graph.hpp"
#include "graphprobe/matrix.hpp"
#include "graphprobe/trainers.hpp"
#include "graphprobe/wl_kernel.hpp"

namespace graphprobe {

enum class ProbeKind { centrality_ec, centrality_bc, distance, structure };

std::string to_string(ProbeKind kind);
ProbeKind parse_probe_kind(const std::string& text);

/// How centrality pairs are divided into train and test. by_pair keeps both
/// orientations of a pair together but lets a node appear on both sides;
/// by_node partitions the nodes first so held-out pairs only involve nodes
/// the probe never saw.
enum class PairSplit { by_pair, by_node };

std::string to_string(PairSplit split);
PairSplit parse_pair_split(const std::string& text);

struct ProbeConfig {
  ProbeKind probe_kind = ProbeKind::centrality_ec;
  std::string task_tag;  // downstream task the embeddings came from; metadata only
  /// Ordered pairs sampled for the centrality probe. Unset means
  /// min(10 |V|, |V| (|V| - 1)).
  std::optional<std::size_t> pair_sample_size;
  double train_fraction = 0.8;
  PairSplit pair_split = PairSplit::by_pair;
  std::uint64_t seed = 0;
  std::uint32_t distance_cutoff = 3;
  std::optional<std::size_t> distance_rank;  // unset means full rank (dim)
  std::size_t wl_iterations = 3;
  ReadoutMode readout_mode = ReadoutMode::sum;
  JaccardMode jaccard_mode = JaccardMode::multiset;
  std::optional<std::size_t> hidden_dim;  // unset means the embedding dimension

  void validate() const;
};

struct ProbeScore {
  double score = 0.0;
  std::string metric_name;
  std::string model_tag;
  ProbeKind probe_kind = ProbeKind::centrality_ec;
  std::map<std::string, double> auxiliary;
  std::vector<double> per_anchor;  // structure probe only: rho for each anchor graph
};

/// Ordered node pair labelled 1 when C(i) >= C(j).
struct PairLabel {
  NodeId i = 0;
  NodeId j = 0;
  std::uint8_t label = 0;

  friend bool operator==(const PairLabel&, const PairLabel&) = default;
};

struct PairDataset {
  std::vector<PairLabel> train;
  std::vector<PairLabel> test;
  std::size_t requested = 0;
  bool clamped = false;  // requested more pairs than exist
};

std::size_t default_pair_sample_size(std::size_t num_nodes);

/// Samples ordered pairs of distinct nodes without replacement, labels them by
/// centrality comparison (ties give 1), and splits them so that (i,j) and
/// (j,i) always land in the same partition. Under PairSplit::by_node the
/// nodes are split by train_fraction and each side samples its share of
/// pairs among its own nodes.
PairDataset build_pair_dataset(const CentralityVector& centrality, const ProbeConfig& cfg);

/// Trains the pairwise MLP on h_i || h_j and scores held-out pairs.
/// score is accuracy in percent; auxiliary holds f1, auc, base rate and sizes.
ProbeScore centrality_probe(const Graph& g, const EmbeddingMatrix& emb, CentralityKind kind, const ProbeConfig& cfg,
                            const TrainConfig& train_cfg);
/// Same, with the centrality supplied by the caller.
ProbeScore centrality_probe(const CentralityVector& centrality, const EmbeddingMatrix& emb, const ProbeConfig& cfg,
                            const TrainConfig& train_cfg);

inline constexpr double kDistanceScoreEpsilon = 1e-9;

struct DistanceSplit {
  std::vector<DistancePair> train;
  std::vector<DistancePair> test;
};

DistanceSplit split_distance_pairs(const DistanceTable& table, double train_fraction, std::uint64_t seed);

/// Fits B on the training pairs within cfg.distance_cutoff and scores
/// 1 / (sum of held-out absolute losses + 1e-9).
ProbeScore distance_probe(const Graph& g, const EmbeddingMatrix& emb, const ProbeConfig& cfg,
                          const TrainConfig& train_cfg, std::optional<DistanceProbeParams> init = std::nullopt);

struct StructureComparison {
  std::vector<double> per_anchor;  // rho for each anchor; 0 when undefined
  std::size_t undefined_anchors = 0;
  double mean = 0.0;
};

/// Row-wise Spearman agreement of two square similarity matrices with the
/// diagonal left out of every row.
StructureComparison compare_similarity_matrices(const Matrix& embedding_similarity,
                                                const Matrix& structural_similarity);

/// Pairwise cosine of pooled graph embeddings against pairwise WL Jaccard,
/// averaged over anchor graphs.
ProbeScore structural_probe(const GraphCollection& collection, const std::vector<EmbeddingMatrix>& embeddings,
                            const ProbeConfig& cfg);

}  // namespace graphprobe
