// Graph generators and independent reference implementations used only by tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphprobe/graph.hpp"
#include "graphprobe/random.hpp"

namespace graphprobe::testing {

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v) edges.push_back({v, static_cast<NodeId>((v + 1) % n)});
  return Graph(n, edges);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, edges);
}

// Node 0 is the center.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph(leaves + 1, edges);
}

inline Graph two_triangles() { return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

inline Graph random_gnp(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.push_back({u, v});
    }
  }
  return Graph(n, edges);
}

inline bool is_connected(const Graph& g) {
  if (g.num_nodes() == 0) return true;
  std::vector<bool> seen(g.num_nodes(), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const NodeId w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.num_nodes();
}

inline Graph random_connected_gnp(std::size_t n, double p, Rng& rng) {
  for (;;) {
    Graph g = random_gnp(n, p, rng);
    if (g.num_edges() > 0 && is_connected(g)) return g;
  }
}

// Uniform attachment tree: node v joins a random earlier node.
inline Graph random_tree(std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(rng.below(v)), v});
  return Graph(n, edges);
}

inline std::vector<NodeId> random_permutation(std::size_t n, Rng& rng) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  rng.shuffle(std::span(perm));
  return perm;
}

inline EmbeddingMatrix gaussian_embeddings(std::size_t n, std::size_t dim, Rng& rng, std::string tag = "random") {
  Matrix m(n, dim);
  for (double& v : m.data()) v = rng.normal();
  return EmbeddingMatrix(std::move(m), std::move(tag));
}

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// All-pairs hop distances by Floyd-Warshall.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, kUnreachable));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  std::vector<std::vector<std::uint32_t>> out(n, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = static_cast<std::uint32_t>(std::min<std::uint64_t>(d[i][j], kUnreachable));
  }
  return out;
}

// Betweenness by listing every shortest path of every unordered pair.
// Returns per-node values and, through `pair_total`, the sum over pairs of
// (interior-node count weighted by path share).
inline std::vector<double> brute_force_betweenness(const Graph& g, double* pair_total = nullptr) {
  const std::size_t n = g.num_nodes();
  const auto dist = floyd_warshall(g);
  std::vector<double> bc(n, 0.0);
  double total = 0.0;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      if (dist[s][t] == kUnreachable) continue;
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> current{s};
      // Depth-first listing of all simple s-t walks of the shortest length.
      auto extend = [&](auto&& self) -> void {
        const NodeId v = current.back();
        if (v == t) {
          paths.push_back(current);
          return;
        }
        if (current.size() - 1 == dist[s][t]) return;
        for (const NodeId w : g.neighbors(v)) {
          if (std::find(current.begin(), current.end(), w) != current.end()) continue;
          current.push_back(w);
          self(self);
          current.pop_back();
        }
      };
      extend(extend);
      std::vector<std::int64_t> through(n, 0);
      for (const auto& path : paths) {
        if (path.back() != t || path.size() - 1 != dist[s][t]) continue;
        for (std::size_t k = 1; k + 1 < path.size(); ++k) ++through[path[k]];
      }
      std::int64_t count = 0;
      for (const auto& path : paths) count += (path.back() == t && path.size() - 1 == dist[s][t]) ? 1 : 0;
      for (std::size_t v = 0; v < n; ++v) {
        const double share = static_cast<double>(through[v]) / static_cast<double>(count);
        bc[v] += share;
        total += share;
      }
    }
  }
  if (pair_total) *pair_total = total;
  return bc;
}

struct DenseEigen {
  double eigenvalue = 0.0;
  std::vector<double> vector;  // unit norm, non-negative orientation
  double gap = 0.0;            // largest minus second-largest eigenvalue
};

// Principal eigenpair of the adjacency matrix from a full symmetric eigensolve.
inline DenseEigen dense_principal_eigenvector(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  const auto& values = solver.eigenvalues();
  Eigen::VectorXd v = solver.eigenvectors().col(n - 1);
  if (v.sum() < 0) v = -v;
  DenseEigen out;
  out.eigenvalue = values(n - 1);
  out.gap = n > 1 ? values(n - 1) - values(n - 2) : 0.0;
  out.vector.assign(v.data(), v.data() + n);
  return out;
}

// Weisfeiler-Lehman relabeling written with readable string labels instead
// of an interning table: a node's round-t label is its round-(t-1) label
// followed by the sorted list of its neighbors' round-(t-1) labels.
inline std::map<std::string, std::size_t> wl_string_bag(const Graph& g, std::size_t iterations) {
  std::vector<std::string> labels(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    labels[v] = g.has_node_labels() ? "c" + std::to_string((*g.node_labels())[v]) : "d" + std::to_string(g.degree(v));
  }
  std::map<std::string, std::size_t> bag;
  for (const auto& l : labels) ++bag["0:" + l];
  for (std::size_t t = 1; t <= iterations; ++t) {
    std::vector<std::string> next(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::vector<std::string> nbrs;
      for (const NodeId u : g.neighbors(v)) nbrs.push_back(labels[u]);
      std::sort(nbrs.begin(), nbrs.end());
      std::string s = "(" + labels[v] + "|";
      for (const auto& x : nbrs) s += x + ",";
      next[v] = s + ")";
    }
    labels = std::move(next);
    for (const auto& l : labels) ++bag[std::to_string(t) + ":" + l];
  }
  return bag;
}

inline double multiset_jaccard(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> both;
  for (const auto& [k, c] : a) both[k].first = c;
  for (const auto& [k, c] : b) both[k].second = c;
  double mn = 0.0;
  double mx = 0.0;
  for (const auto& [k, cs] : both) {
    mn += static_cast<double>(std::min(cs.first, cs.second));
    mx += static_cast<double>(std::max(cs.first, cs.second));
  }
  return mx == 0.0 ? 1.0 : mn / mx;
}

// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    Rng rng(static_cast<std::uint64_t>(std::hash<std::string>{}(std::filesystem::current_path().string())) ^
            static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)));
    for (;;) {
      path_ = std::filesystem::temp_directory_path() / ("graphprobe-test-" + std::to_string(rng.next() % 1000000000));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace graphprobe::testing
