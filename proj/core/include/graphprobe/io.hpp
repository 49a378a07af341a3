#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "graphprobe/graph.hpp"

namespace graphprobe {

// Edge-list format:
//
//   # n=<count>        optional header; declares the node count
//   u<TAB>v            one edge per line (any whitespace separates)
//
// Other lines starting with '#' and blank lines are ignored. Reversed and
// repeated edges collapse to one. Without a header the node count is
// max index + 1. Node class labels live in an optional sidecar with one
// integer per line, found by replacing the extension with ".labels".

Graph parse_edge_list(std::istream& in, std::optional<std::vector<ClassLabel>> node_labels = std::nullopt);
std::vector<ClassLabel> parse_labels(std::istream& in);

/// Reads `path` and, when present, its ".labels" sidecar.
Graph load_graph(const std::filesystem::path& path);
std::filesystem::path labels_sidecar_path(const std::filesystem::path& graph_path);

/// Writes the header, the edges, and the sidecar when the graph has labels.
void save_graph(const Graph& graph, const std::filesystem::path& path);
void write_edge_list(const Graph& graph, std::ostream& out);

// Graph collections: JSON lines, one graph per line:
//   {"edges": [[u,v],...], "num_nodes": n, "label": c, "node_labels": [...]}
// "label" and "node_labels" are optional.

GraphCollection parse_collection(std::istream& in, std::string name = {});
GraphCollection load_collection(const std::filesystem::path& path);
void save_collection(const GraphCollection& collection, const std::filesystem::path& path);
void write_collection(const GraphCollection& collection, std::ostream& out);

// Embedding text format: header "n d model_tag", then n rows of d reals.

EmbeddingMatrix parse_embeddings(std::istream& in);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingMatrix& embeddings, const std::filesystem::path& path);
/// Values are written in shortest round-trip form, so a reload is exact.
void write_embeddings(const EmbeddingMatrix& embeddings, std::ostream& out);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace graphprobe
