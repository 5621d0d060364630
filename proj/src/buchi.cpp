#include "tapred/buchi.hpp"

#include <algorithm>
#include <deque>

namespace tapred {

std::vector<int> strongly_connected_components(const RegionGraph& g, const std::vector<bool>* edge_mask,
                                               int* count) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0, components = 0;
  if (g.initial < 0) {
    if (count) *count = 0;
    return comp;
  }

  struct Frame {
    int node;
    std::size_t next_edge;
  };
  std::vector<Frame> call{{g.initial, 0}};
  index[static_cast<std::size_t>(g.initial)] = low[static_cast<std::size_t>(g.initial)] = next_index++;
  stack.push_back(g.initial);
  on_stack[static_cast<std::size_t>(g.initial)] = true;

  while (!call.empty()) {
    Frame& f = call.back();
    const auto& outs = g.out[static_cast<std::size_t>(f.node)];
    if (f.next_edge < outs.size()) {
      int ei = outs[f.next_edge++];
      if (edge_mask && !(*edge_mask)[static_cast<std::size_t>(ei)]) continue;
      int w = g.edges[static_cast<std::size_t>(ei)].dst;
      auto wi = static_cast<std::size_t>(w);
      if (index[wi] < 0) {
        index[wi] = low[wi] = next_index++;
        stack.push_back(w);
        on_stack[wi] = true;
        call.push_back({w, 0});
      } else if (on_stack[wi]) {
        auto& l = low[static_cast<std::size_t>(f.node)];
        l = std::min(l, index[wi]);
      }
      continue;
    }
    int v = f.node;
    auto vi = static_cast<std::size_t>(v);
    call.pop_back();
    if (!call.empty()) {
      auto& l = low[static_cast<std::size_t>(call.back().node)];
      l = std::min(l, low[vi]);
    }
    if (low[vi] == index[vi]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp[static_cast<std::size_t>(w)] = components;
      } while (w != v);
      ++components;
    }
  }
  if (count) *count = components;
  return comp;
}

BuchiResult buchi_empty(const RegionGraph& g) {
  BuchiResult result;
  if (g.initial < 0) return result;
  int count = 0;
  auto comp = strongly_connected_components(g, nullptr, &count);

  // A component can carry a cycle if it has an internal edge.
  std::vector<bool> cyclic(static_cast<std::size_t>(count), false);
  for (const auto& e : g.edges) {
    int c = comp[static_cast<std::size_t>(e.src)];
    if (c >= 0 && c == comp[static_cast<std::size_t>(e.dst)]) cyclic[static_cast<std::size_t>(c)] = true;
  }
  auto good = [&](int v) {
    int c = comp[static_cast<std::size_t>(v)];
    return c >= 0 && g.repeated[static_cast<std::size_t>(v)] && cyclic[static_cast<std::size_t>(c)];
  };

  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<int> parent(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<int> queue{g.initial};
  seen[static_cast<std::size_t>(g.initial)] = true;
  int target = -1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (good(v)) {
      target = v;
      break;
    }
    for (int ei : g.out[static_cast<std::size_t>(v)]) {
      int w = g.edges[static_cast<std::size_t>(ei)].dst;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      parent[static_cast<std::size_t>(w)] = ei;
      queue.push_back(w);
    }
  }
  if (target < 0) return result;

  Lasso lasso;
  for (int v = target; v != g.initial;) {
    int ei = parent[static_cast<std::size_t>(v)];
    lasso.stem.push_back(ei);
    v = g.edges[static_cast<std::size_t>(ei)].src;
  }
  std::reverse(lasso.stem.begin(), lasso.stem.end());

  // Shortest cycle through target inside its component.
  int c = comp[static_cast<std::size_t>(target)];
  std::fill(parent.begin(), parent.end(), -1);
  std::fill(seen.begin(), seen.end(), false);
  queue.clear();
  int closing = -1;
  for (int ei : g.out[static_cast<std::size_t>(target)]) {
    int w = g.edges[static_cast<std::size_t>(ei)].dst;
    if (comp[static_cast<std::size_t>(w)] != c) continue;
    if (w == target) {
      closing = ei;
      break;
    }
    if (seen[static_cast<std::size_t>(w)]) continue;
    seen[static_cast<std::size_t>(w)] = true;
    parent[static_cast<std::size_t>(w)] = ei;
    queue.push_back(w);
  }
  while (closing < 0 && !queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int ei : g.out[static_cast<std::size_t>(v)]) {
      int w = g.edges[static_cast<std::size_t>(ei)].dst;
      if (comp[static_cast<std::size_t>(w)] != c) continue;
      if (w == target) {
        closing = ei;
        break;
      }
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      parent[static_cast<std::size_t>(w)] = ei;
      queue.push_back(w);
    }
  }
  lasso.cycle.push_back(closing);
  for (int v = g.edges[static_cast<std::size_t>(closing)].src; v != target;) {
    int ei = parent[static_cast<std::size_t>(v)];
    lasso.cycle.push_back(ei);
    v = g.edges[static_cast<std::size_t>(ei)].src;
  }
  std::reverse(lasso.cycle.begin(), lasso.cycle.end());

  result.empty = false;
  result.lasso = std::move(lasso);
  return result;
}

}  // namespace tapred
