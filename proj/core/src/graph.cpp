#include "graphprobe/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphprobe/error.hpp"

namespace graphprobe {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                          std::to_string(rows_ * cols_));
  }
}

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges, std::optional<std::vector<ClassLabel>> node_labels,
             std::optional<Matrix> node_features, std::optional<ClassLabel> graph_label)
    : num_nodes_(num_nodes),
      node_labels_(std::move(node_labels)),
      node_features_(std::move(node_features)),
      graph_label_(graph_label) {
  if (num_nodes_ > std::numeric_limits<NodeId>::max()) {
    throw ValidationError("node count " + std::to_string(num_nodes_) + " exceeds the supported range");
  }
  for (auto& e : edges) {
    if (e.u >= num_nodes_ || e.v >= num_nodes_) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range for " +
                            std::to_string(num_nodes_) + " nodes");
    }
    if (e.u == e.v) throw ValidationError("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  if (node_labels_ && node_labels_->size() != num_nodes_) {
    throw ValidationError("expected " + std::to_string(num_nodes_) + " node labels, got " +
                          std::to_string(node_labels_->size()));
  }
  if (node_features_ && node_features_->rows() != num_nodes_) {
    throw ValidationError("expected " + std::to_string(num_nodes_) + " feature rows, got " +
                          std::to_string(node_features_->rows()));
  }

  std::vector<std::size_t> degree(num_nodes_, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(num_nodes_ + 1, 0);
  for (std::size_t v = 0; v < num_nodes_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so each list fills in ascending order.
  for (const auto& e : edges_) adjacency_[cursor[e.u]++] = e.v;
  for (const auto& e : edges_) adjacency_[cursor[e.v]++] = e.u;
  for (std::size_t v = 0; v < num_nodes_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes_ || v >= num_nodes_) return false;
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
  if (perm.size() != num_nodes_) throw ValidationError("permutation size does not match node count");
  std::vector<bool> seen(num_nodes_, false);
  for (const NodeId p : perm) {
    if (p >= num_nodes_ || seen[p]) throw ValidationError("not a permutation");
    seen[p] = true;
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) edges.push_back({perm[e.u], perm[e.v]});

  std::optional<std::vector<ClassLabel>> labels;
  if (node_labels_) {
    labels.emplace(num_nodes_);
    for (std::size_t v = 0; v < num_nodes_; ++v) (*labels)[perm[v]] = (*node_labels_)[v];
  }
  std::optional<Matrix> features;
  if (node_features_) {
    features.emplace(num_nodes_, node_features_->cols());
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      std::copy(node_features_->row(v).begin(), node_features_->row(v).end(), features->row(perm[v]).begin());
    }
  }
  return Graph(num_nodes_, std::move(edges), std::move(labels), std::move(features), graph_label_);
}

EmbeddingMatrix::EmbeddingMatrix(Matrix rows, std::string model_tag)
    : rows_(std::move(rows)), model_tag_(std::move(model_tag)) {
  if (rows_.cols() == 0) throw ValidationError("embedding dimension must be at least 1");
  for (std::size_t r = 0; r < rows_.rows(); ++r) {
    for (const double x : rows_.row(r)) {
      if (!std::isfinite(x)) throw ValidationError("non-finite embedding value in row " + std::to_string(r));
    }
  }
}

std::string to_string(ReadoutMode mode) {
  switch (mode) {
    case ReadoutMode::sum:
      return "sum";
    case ReadoutMode::mean:
      return "mean";
    case ReadoutMode::max:
      return "max";
  }
  return "sum";
}

ReadoutMode parse_readout_mode(const std::string& text) {
  if (text == "sum") return ReadoutMode::sum;
  if (text == "mean") return ReadoutMode::mean;
  if (text == "max") return ReadoutMode::max;
  throw ValidationError("unknown readout mode '" + text + "'");
}

GraphEmbedding readout(const EmbeddingMatrix& embeddings, ReadoutMode mode, std::size_t graph_index) {
  if (embeddings.num_nodes() == 0) throw ValidationError("readout of an empty embedding matrix");
  const std::size_t dim = embeddings.dim();
  GraphEmbedding out;
  out.graph_index = graph_index;
  const auto first = embeddings.row(0);
  out.vector.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < embeddings.num_nodes(); ++r) {
    const auto row = embeddings.row(r);
    for (std::size_t c = 0; c < dim; ++c) {
      if (mode == ReadoutMode::max) {
        out.vector[c] = std::max(out.vector[c], row[c]);
      } else {
        out.vector[c] += row[c];
      }
    }
  }
  if (mode == ReadoutMode::mean) {
    for (double& x : out.vector) x /= static_cast<double>(embeddings.num_nodes());
  }
  return out;
}

}  // namespace graphprobe
