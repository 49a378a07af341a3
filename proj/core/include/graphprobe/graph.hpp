#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphprobe/matrix.hpp"

namespace graphprobe {

using NodeId = std::uint32_t;
using ClassLabel = std::int64_t;

/// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected, unweighted simple graph.
///
/// Edges are normalized to (min, max), sorted and deduplicated on
/// construction. Self-loops and out-of-range endpoints are rejected.
/// Adjacency is kept in CSR form with sorted neighbor lists.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t num_nodes, std::vector<Edge> edges,
        std::optional<std::vector<ClassLabel>> node_labels = std::nullopt,
        std::optional<Matrix> node_features = std::nullopt,
        std::optional<ClassLabel> graph_label = std::nullopt);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  bool has_node_labels() const noexcept { return node_labels_.has_value(); }
  const std::optional<std::vector<ClassLabel>>& node_labels() const noexcept { return node_labels_; }
  const std::optional<Matrix>& node_features() const noexcept { return node_features_; }
  const std::optional<ClassLabel>& graph_label() const noexcept { return graph_label_; }

  /// Graph with node v renamed to perm[v]. Labels and features move along.
  Graph permuted(std::span<const NodeId> perm) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_ && a.node_labels_ == b.node_labels_ &&
           a.node_features_ == b.node_features_ && a.graph_label_ == b.graph_label_;
  }

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::optional<std::vector<ClassLabel>> node_labels_;
  std::optional<Matrix> node_features_;
  std::optional<ClassLabel> graph_label_;
};

/// Ordered, non-empty list of graphs. Index m names graph m for a whole run.
struct GraphCollection {
  std::string name;
  std::vector<Graph> graphs;

  std::size_t size() const noexcept { return graphs.size(); }
};

/// Learned node representations from one model: one row of `dim` reals per node.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  /// Throws ValidationError on dim == 0 or any non-finite entry.
  EmbeddingMatrix(Matrix rows, std::string model_tag);

  std::size_t num_nodes() const noexcept { return rows_.rows(); }
  std::size_t dim() const noexcept { return rows_.cols(); }
  std::span<const double> row(std::size_t node) const { return rows_.row(node); }
  const Matrix& rows() const noexcept { return rows_; }
  const std::string& model_tag() const noexcept { return model_tag_; }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  Matrix rows_;
  std::string model_tag_;
};

/// Whole-graph representation obtained by pooling node rows.
struct GraphEmbedding {
  std::vector<double> vector;
  std::size_t graph_index = 0;
};

enum class ReadoutMode { sum, mean, max };

std::string to_string(ReadoutMode mode);
ReadoutMode parse_readout_mode(const std::string& text);

/// Element-wise pooling over all node rows. Throws ValidationError when empty.
GraphEmbedding readout(const EmbeddingMatrix& embeddings, ReadoutMode mode = ReadoutMode::sum,
                       std::size_t graph_index = 0);

}  // namespace graphprobe
