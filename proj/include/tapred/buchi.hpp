#pragma once

#include "tapred/region_graph.hpp"

#include <optional>
#include <vector>

namespace tapred {

/// Stem from the initial node to a repeated node, then a nonempty cycle
/// back to it. Both are edge index sequences.
struct Lasso {
  std::vector<int> stem;
  std::vector<int> cycle;
};

struct BuchiResult {
  bool empty = true;
  std::optional<Lasso> lasso;
};

/// Strongly connected components (iterative Tarjan) of the subgraph
/// reachable from `g.initial`; component id per node, -1 if unreachable.
std::vector<int> strongly_connected_components(const RegionGraph& g, const std::vector<bool>* edge_mask = nullptr,
                                               int* count = nullptr);

BuchiResult buchi_empty(const RegionGraph& g);

}  // namespace tapred
