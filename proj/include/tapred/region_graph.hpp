#pragma once

#include "tapred/timed_automaton.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tapred {

struct RegionEdge {
  int src = 0;
  int dst = 0;
  /// Automaton edge index, or -1 for a delay successor.
  int ta_edge = -1;
};

/// Finite time-abstract quotient. A region stores, per clock, its integer
/// part (max+1 meaning "above the maximal constant") followed by, per
/// clock, the rank of its fractional part: 0 for an integer value, 1.. for
/// increasing positive fractions, -1 for clocks above the maximum.
struct RegionGraph {
  int clocks = 0;
  std::vector<long long> max_constants;
  std::vector<int> location;
  std::vector<std::int16_t> regions;
  std::vector<bool> repeated;
  std::vector<RegionEdge> edges;
  std::vector<std::vector<int>> out;
  int initial = -1;

  int num_nodes() const { return static_cast<int>(location.size()); }
  std::span<const std::int16_t> region(int node) const {
    return {regions.data() + static_cast<std::size_t>(node) * 2 * static_cast<std::size_t>(clocks),
            2 * static_cast<std::size_t>(clocks)};
  }
  int add_node(int loc, bool rep, std::span<const std::int16_t> region = {});
  int add_edge(int src, int dst, int ta_edge);
};

struct RegionGraphOptions {
  /// Level-synchronous expansion with per-level successor computation
  /// under OpenMP. Output is identical to the serial FIFO construction.
  bool parallel = true;
  /// Collapse clocks that can no longer influence the future.
  bool reduce_inactive = true;
  std::size_t node_limit = 20'000'000;
};

RegionGraph region_graph(const TimedAutomaton& a, const RegionGraphOptions& options = {});

/// Human-readable region, e.g. "x=1, 0<y<1, frac(y)<frac(z)".
std::string describe_region(const RegionGraph& g, int node, const std::vector<std::string>& clock_names);

/// A valuation inside the region of `node` with denominators 2*(clocks+1).
std::vector<Rational> region_representative(const RegionGraph& g, int node);

/// Reachable cycles made only of delays and edges outside the observable
/// alphabet. Returns one node per offending strongly connected component.
std::vector<int> silent_cycles(const RegionGraph& g, const TimedAutomaton& a);

std::string region_graph_dot(const RegionGraph& g, const TimedAutomaton& a);

}  // namespace tapred

namespace tapred {

/// The region containing a valuation, in the layout used by RegionGraph.
std::vector<std::int16_t> region_of(const std::vector<Rational>& valuation,
                                    const std::vector<long long>& max_constants);

}  // namespace tapred
