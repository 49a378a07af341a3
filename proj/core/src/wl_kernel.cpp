#include "graphprobe/wl_kernel.hpp"

#include <algorithm>
#include <numeric>

#include "graphprobe/error.hpp"

namespace graphprobe {
namespace {

// Signature prefixes keep seeds and each round in disjoint key spaces.
constexpr std::int64_t kSeedFromClass = -1;
constexpr std::int64_t kSeedFromDegree = -2;

}  // namespace

WlLabel WlLabelTable::intern(const std::vector<std::int64_t>& signature) {
  std::lock_guard lock(mutex_);
  const auto [it, inserted] = ids_.try_emplace(signature, static_cast<WlLabel>(ids_.size()));
  return it->second;
}

std::size_t WlLabelTable::size() const {
  std::lock_guard lock(mutex_);
  return ids_.size();
}

std::size_t WlLabelBag::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0},
                         [](std::size_t acc, const auto& kv) { return acc + kv.second; });
}

std::vector<std::vector<WlLabel>> wl_refine(const Graph& g, std::size_t iterations, WlLabelTable& table) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<WlLabel>> rounds;
  rounds.reserve(iterations + 1);

  std::vector<WlLabel> current(n);
  for (NodeId v = 0; v < n; ++v) {
    if (g.has_node_labels()) {
      current[v] = table.intern({kSeedFromClass, (*g.node_labels())[v]});
    } else {
      current[v] = table.intern({kSeedFromDegree, static_cast<std::int64_t>(g.degree(v))});
    }
  }
  rounds.push_back(current);

  std::vector<std::int64_t> signature;
  std::vector<WlLabel> next(n);
  for (std::size_t t = 1; t <= iterations; ++t) {
    for (NodeId v = 0; v < n; ++v) {
      signature.clear();
      signature.push_back(static_cast<std::int64_t>(t));
      signature.push_back(current[v]);
      const auto start = signature.size();
      for (const NodeId u : g.neighbors(v)) signature.push_back(current[u]);
      std::sort(signature.begin() + static_cast<std::ptrdiff_t>(start), signature.end());
      next[v] = table.intern(signature);
    }
    current.swap(next);
    rounds.push_back(current);
  }
  return rounds;
}

WlLabelBag wl_relabel(const Graph& g, std::size_t iterations, WlLabelTable& table) {
  WlLabelBag bag;
  bag.iterations = iterations;
  for (const auto& round : wl_refine(g, iterations, table)) {
    for (const WlLabel label : round) ++bag.counts[label];
  }
  return bag;
}

double wl_jaccard(const WlLabelBag& a, const WlLabelBag& b, JaccardMode mode) {
  if (a.iterations != b.iterations) {
    throw ValidationError("WL bags built with " + std::to_string(a.iterations) + " and " +
                          std::to_string(b.iterations) + " iterations");
  }
  double inter = 0.0;
  double uni = 0.0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  const bool multiset = mode == JaccardMode::multiset;
  while (ia != a.counts.end() || ib != b.counts.end()) {
    if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
      uni += multiset ? static_cast<double>(ia->second) : 1.0;
      ++ia;
    } else if (ia == a.counts.end() || ib->first < ia->first) {
      uni += multiset ? static_cast<double>(ib->second) : 1.0;
      ++ib;
    } else {
      inter += multiset ? static_cast<double>(std::min(ia->second, ib->second)) : 1.0;
      uni += multiset ? static_cast<double>(std::max(ia->second, ib->second)) : 1.0;
      ++ia;
      ++ib;
    }
  }
  return uni == 0.0 ? 1.0 : inter / uni;
}

}  // namespace graphprobe
