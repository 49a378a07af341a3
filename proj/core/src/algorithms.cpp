#include "graphprobe/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "graphprobe/error.hpp"

namespace graphprobe {
namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void normalize(std::vector<double>& x) {
  double norm = 0.0;
  for (const double v : x) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : x) v /= norm;
}

}  // namespace

std::string to_string(CentralityKind kind) {
  return kind == CentralityKind::eigenvector ? "eigenvector" : "betweenness";
}

double rayleigh_quotient(const Graph& g, std::span<const double> x) {
  double num = 0.0;
  double den = 0.0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double ax = 0.0;
    for (const NodeId u : g.neighbors(v)) ax += x[u];
    num += x[v] * ax;
    den += x[v] * x[v];
  }
  return num / den;
}

EigenvectorResult eigenvector_centrality_detailed(const Graph& g, PowerIterationOptions options) {
  if (g.num_edges() == 0) throw ValidationError("eigenvector centrality needs at least one edge");
  const std::size_t n = g.num_nodes();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> previous;  // iterate before x, for period-2 detection
  std::vector<double> next(n);
  bool shifted = false;
  double residual = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double sum = shifted ? x[v] : 0.0;
      for (const NodeId u : g.neighbors(v)) sum += x[u];
      next[v] = sum;
    }
    normalize(next);
    residual = max_abs_diff(next, x);
    if (residual < options.tol) {
      // Isolated nodes only decay geometrically under the shift; pin them.
      bool touched = false;
      for (NodeId v = 0; v < n; ++v) {
        if (g.degree(v) == 0 && next[v] != 0.0) {
          next[v] = 0.0;
          touched = true;
        }
      }
      if (touched) normalize(next);
      EigenvectorResult result;
      result.centrality = {CentralityKind::eigenvector, next};
      result.eigenvalue = rayleigh_quotient(g, next);
      result.iterations = it;
      result.shifted = shifted;
      return result;
    }
    if (!shifted && !previous.empty() && max_abs_diff(next, previous) < options.tol) shifted = true;
    previous = x;
    x = next;
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(options.max_iter) + " iterations",
                         residual);
}

CentralityVector eigenvector_centrality(const Graph& g, PowerIterationOptions options) {
  return eigenvector_centrality_detailed(g, options).centrality;
}

CentralityVector betweenness_centrality(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<std::int64_t> dist(n);
  std::vector<NodeId> order;
  order.reserve(n);
  std::deque<NodeId> queue;

  for (NodeId s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (const NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Dependencies in reverse BFS order; predecessors are neighbors one level up.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (const NodeId v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  // Every unordered pair was counted once from each endpoint.
  for (double& v : bc) v /= 2.0;
  return {CentralityKind::betweenness, std::move(bc)};
}

std::optional<std::uint32_t> DistanceTable::distance(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{a, b}, [](const DistancePair& p, auto key) {
    return std::pair{p.i, p.j} < key;
  });
  if (it == pairs.end() || it->i != a || it->j != b) return std::nullopt;
  return it->distance;
}

std::vector<std::optional<std::uint32_t>> bfs_distances(const Graph& g, NodeId source) {
  std::vector<std::optional<std::uint32_t>> dist(g.num_nodes());
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (const NodeId w : g.neighbors(v)) {
      if (!dist[w]) {
        dist[w] = *dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

DistanceTable shortest_paths_bounded(const Graph& g, std::uint32_t cutoff) {
  if (cutoff < 1) throw ValidationError("distance cutoff must be at least 1");
  DistanceTable table;
  table.cutoff = cutoff;
  const std::size_t n = g.num_nodes();
  std::vector<bool> seen(n);
  std::vector<NodeId> frontier;
  std::vector<NodeId> next;
  std::vector<DistancePair> row;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), false);
    seen[s] = true;
    frontier.assign(1, s);
    row.clear();
    for (std::uint32_t depth = 1; depth <= cutoff && !frontier.empty(); ++depth) {
      next.clear();
      for (const NodeId v : frontier) {
        for (const NodeId w : g.neighbors(v)) {
          if (seen[w]) continue;
          seen[w] = true;
          next.push_back(w);
          if (w > s) row.push_back({s, w, depth});
        }
      }
      frontier.swap(next);
    }
    std::sort(row.begin(), row.end(), [](const DistancePair& a, const DistancePair& b) { return a.j < b.j; });
    table.pairs.insert(table.pairs.end(), row.begin(), row.end());
  }
  return table;
}

double homophily_ratio(const Graph& g) {
  if (!g.has_node_labels()) throw ValidationError("homophily ratio needs node class labels");
  if (g.num_edges() == 0) throw ValidationError("homophily ratio needs at least one edge");
  const auto& labels = *g.node_labels();
  std::size_t same = 0;
  for (const auto& e : g.edges()) {
    if (labels[e.u] == labels[e.v]) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(g.num_edges());
}

}  // namespace graphprobe
