#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "graphprobe/graph.hpp"

namespace graphprobe {

using WlLabel = std::uint32_t;

/// Injective map from relabeling signatures to compact label ids.
///
/// One table must be shared by every graph in a comparison so that equal
/// neighborhoods receive equal ids. Ids are opaque: only equality matters.
/// Lookups are serialized by an internal mutex.
class WlLabelTable {
 public:
  WlLabelTable() = default;
  WlLabelTable(const WlLabelTable&) = delete;
  WlLabelTable& operator=(const WlLabelTable&) = delete;

  WlLabel intern(const std::vector<std::int64_t>& signature);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::vector<std::int64_t>, WlLabel> ids_;
};

/// Multiset of node labels pooled over iterations 0..h.
struct WlLabelBag {
  std::map<WlLabel, std::size_t> counts;
  std::size_t iterations = 0;

  std::size_t total() const;
  friend bool operator==(const WlLabelBag&, const WlLabelBag&) = default;
};

/// Node labels per iteration: result[t][v] is node v's label after t rounds.
///
/// Round 0 seeds each node with its class label when the graph has labels,
/// otherwise with its degree. Round t maps (iteration t, own label, sorted
/// neighbor labels) through the table.
std::vector<std::vector<WlLabel>> wl_refine(const Graph& g, std::size_t iterations, WlLabelTable& table);

/// Bag of all labels from rounds 0 through `iterations`.
WlLabelBag wl_relabel(const Graph& g, std::size_t iterations, WlLabelTable& table);

enum class JaccardMode { multiset, set };

/// Sum of min counts over sum of max counts (multiset), or |A n B| / |A u B|
/// on supports (set). Two empty bags compare as 1. Throws ValidationError
/// when the bags were built with different iteration counts.
double wl_jaccard(const WlLabelBag& a, const WlLabelBag& b, JaccardMode mode = JaccardMode::multiset);

}  // namespace graphprobe
