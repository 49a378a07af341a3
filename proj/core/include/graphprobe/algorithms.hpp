#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphprobe/graph.hpp"

namespace graphprobe {

enum class CentralityKind { eigenvector, betweenness };

std::string to_string(CentralityKind kind);

/// Per-node centrality scores of one kind.
struct CentralityVector {
  CentralityKind kind = CentralityKind::eigenvector;
  std::vector<double> values;
};

struct PowerIterationOptions {
  std::size_t max_iter = 1000;
  double tol = 1e-9;
};

/// Diagnostics from the power iteration behind eigenvector centrality.
struct EigenvectorResult {
  CentralityVector centrality;
  double eigenvalue = 0.0;  // Rayleigh quotient of the returned vector on A
  std::size_t iterations = 0;
  bool shifted = false;  // true when the iteration switched to A + I
};

/// Principal eigenvector of the adjacency matrix by power iteration from the
/// all-ones vector, normalized to unit Euclidean norm with non-negative
/// entries. A period-2 oscillation (bipartite spectra, where -lambda is also
/// an eigenvalue) switches the iteration to A + I, which has the same
/// eigenvectors. Isolated nodes score exactly 0.
///
/// Throws ValidationError for an edgeless graph and ConvergenceError when
/// successive iterates still differ by >= tol after max_iter steps.
EigenvectorResult eigenvector_centrality_detailed(const Graph& g, PowerIterationOptions options = {});
CentralityVector eigenvector_centrality(const Graph& g, PowerIterationOptions options = {});

/// Unnormalized betweenness over unordered endpoint pairs (Brandes).
/// Counting ordered pairs instead gives exactly twice these values.
CentralityVector betweenness_centrality(const Graph& g);

/// x^T A x / x^T x.
double rayleigh_quotient(const Graph& g, std::span<const double> x);

struct DistancePair {
  NodeId i = 0;  // i < j
  NodeId j = 0;
  std::uint32_t distance = 0;

  friend bool operator==(const DistancePair&, const DistancePair&) = default;
};

/// Hop distances for all unordered pairs within `cutoff`, sorted by (i, j).
/// Unreachable pairs and pairs farther than the cutoff are absent.
struct DistanceTable {
  std::vector<DistancePair> pairs;
  std::uint32_t cutoff = 0;

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
  /// Distance for an unordered pair, if stored.
  std::optional<std::uint32_t> distance(NodeId a, NodeId b) const;
};

/// Depth-limited BFS from every node. Throws ValidationError when cutoff < 1.
DistanceTable shortest_paths_bounded(const Graph& g, std::uint32_t cutoff = 3);

/// Full single-source hop distances; unreachable nodes get nullopt.
std::vector<std::optional<std::uint32_t>> bfs_distances(const Graph& g, NodeId source);

/// Fraction of edges joining same-label endpoints.
/// Throws ValidationError when labels are missing or the graph has no edges.
double homophily_ratio(const Graph& g);

}  // namespace graphprobe
