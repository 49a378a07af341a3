#include <cstdio>

#include "graphprobe/algorithms.hpp"
#include "graphprobe/version.hpp"

int main() {
  const graphprobe::Graph g(3, {{0, 1}, {1, 2}});
  const auto bc = graphprobe::betweenness_centrality(g);
  std::printf("graphprobe %s: bc(1) = %g\n", graphprobe::kVersion, bc.values[1]);
  return bc.values[1] == 1.0 ? 0 : 1;
}
