#include "tapred/region_graph.hpp"

#include "tapred/buchi.hpp"
#include "tapred/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tapred {

using Region = std::vector<std::int16_t>;

int RegionGraph::add_node(int loc, bool rep, std::span<const std::int16_t> region) {
  int id = num_nodes();
  location.push_back(loc);
  repeated.push_back(rep);
  out.emplace_back();
  if (region.empty())
    regions.insert(regions.end(), 2 * static_cast<std::size_t>(clocks), 0);
  else
    regions.insert(regions.end(), region.begin(), region.end());
  return id;
}

int RegionGraph::add_edge(int src, int dst, int ta_edge) {
  int id = static_cast<int>(edges.size());
  edges.push_back({src, dst, ta_edge});
  out[static_cast<std::size_t>(src)].push_back(id);
  return id;
}

namespace {

struct Layout {
  int n;
  std::vector<long long> max;

  std::int16_t& ipart(Region& r, int c) const { return r[static_cast<std::size_t>(c)]; }
  std::int16_t& rank(Region& r, int c) const { return r[static_cast<std::size_t>(n + c)]; }
  std::int16_t ipart(const Region& r, int c) const { return r[static_cast<std::size_t>(c)]; }
  std::int16_t rank(const Region& r, int c) const { return r[static_cast<std::size_t>(n + c)]; }
  bool above(const Region& r, int c) const { return rank(r, c) < 0; }

  void set_above(Region& r, int c) const {
    ipart(r, c) = static_cast<std::int16_t>(max[static_cast<std::size_t>(c)] + 1);
    rank(r, c) = -1;
  }

  void compact(Region& r) const {
    std::vector<std::int16_t> used;
    for (int c = 0; c < n; ++c)
      if (rank(r, c) > 0) used.push_back(rank(r, c));
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (int c = 0; c < n; ++c) {
      if (rank(r, c) <= 0) continue;
      rank(r, c) = static_cast<std::int16_t>(std::lower_bound(used.begin(), used.end(), rank(r, c)) - used.begin() + 1);
    }
  }

  bool satisfies(const Region& r, const ClockAtom& a) const {
    if (above(r, a.clock)) return a.rel == Rel::Gt || a.rel == Rel::Ge;
    long long i = ipart(r, a.clock);
    bool integral = rank(r, a.clock) == 0;
    long long k = a.constant;
    switch (a.rel) {
      case Rel::Lt: return i < k;
      case Rel::Le: return integral ? i <= k : i < k;
      case Rel::Eq: return integral && i == k;
      case Rel::Gt: return integral ? i > k : i >= k;
      case Rel::Ge: return i >= k;
    }
    return false;
  }

  bool satisfies(const Region& r, const ClockConstraint& c) const {
    for (const auto& a : c.atoms)
      if (!satisfies(r, a)) return false;
    return true;
  }

  bool delay_successor(const Region& r, Region& next) const {
    next = r;
    bool any_bounded = false, any_integral = false;
    std::int16_t top = 0;
    for (int c = 0; c < n; ++c) {
      if (above(r, c)) continue;
      any_bounded = true;
      if (rank(r, c) == 0) any_integral = true;
      top = std::max(top, rank(r, c));
    }
    if (!any_bounded) return false;
    if (any_integral) {
      for (int c = 0; c < n; ++c) {
        if (above(r, c)) continue;
        if (rank(r, c) == 0) {
          if (ipart(r, c) == max[static_cast<std::size_t>(c)])
            set_above(next, c);
          else
            rank(next, c) = 1;
        } else {
          rank(next, c) = static_cast<std::int16_t>(rank(r, c) + 1);
        }
      }
    } else {
      for (int c = 0; c < n; ++c) {
        if (above(r, c) || rank(r, c) != top) continue;
        ipart(next, c) = static_cast<std::int16_t>(ipart(r, c) + 1);
        rank(next, c) = 0;
      }
    }
    compact(next);
    return true;
  }

  void reset(Region& r, int c) const {
    ipart(r, c) = 0;
    rank(r, c) = 0;
  }

  void reduce(Region& r, const std::vector<bool>& active) const {
    for (int c = 0; c < n; ++c)
      if (!active[static_cast<std::size_t>(c)]) set_above(r, c);
    compact(r);
  }
};

struct Successor {
  int loc;
  int ta_edge;
  Region region;
};

class Builder {
 public:
  Builder(const TimedAutomaton& a, const RegionGraphOptions& options)
      : a_(a), options_(options), layout_{a.num_clocks(), a.max_constants()} {
    for (long long m : layout_.max)
      if (m > 30000) throw InputError("clock constant too large for the region abstraction");
    if (options.reduce_inactive) active_ = active_clocks(a);
    g_.clocks = a.num_clocks();
    g_.max_constants = layout_.max;
  }

  RegionGraph run() {
    if (a_.num_locations() == 0) return std::move(g_);
    Region init(2 * static_cast<std::size_t>(layout_.n), 0);
    if (!layout_.satisfies(init, a_.invariant(a_.initial()))) return std::move(g_);
    if (options_.reduce_inactive) layout_.reduce(init, active_[static_cast<std::size_t>(a_.initial())]);
    g_.initial = intern(a_.initial(), init);
    if (options_.parallel)
      expand_levels();
    else
      expand_fifo();
    return std::move(g_);
  }

 private:
  std::string key(int loc, const Region& r) const {
    std::string k(sizeof(int) + r.size() * sizeof(std::int16_t), '\0');
    std::copy_n(reinterpret_cast<const char*>(&loc), sizeof(int), k.data());
    std::copy_n(reinterpret_cast<const char*>(r.data()), r.size() * sizeof(std::int16_t), k.data() + sizeof(int));
    return k;
  }

  int intern(int loc, const Region& r) {
    auto [it, fresh] = ids_.emplace(key(loc, r), g_.num_nodes());
    if (fresh) {
      if (static_cast<std::size_t>(g_.num_nodes()) >= options_.node_limit)
        throw std::runtime_error("region graph exceeds the node limit");
      g_.add_node(loc, a_.is_repeated(loc), r);
    }
    return it->second;
  }

  std::vector<Successor> successors(int node) const {
    std::vector<Successor> out;
    int loc = g_.location[static_cast<std::size_t>(node)];
    auto span = g_.region(node);
    Region r(span.begin(), span.end());
    Region next;
    if (layout_.delay_successor(r, next) && layout_.satisfies(next, a_.invariant(loc))) {
      if (options_.reduce_inactive) layout_.reduce(next, active_[static_cast<std::size_t>(loc)]);
      if (next != r) out.push_back({loc, -1, std::move(next)});
    }
    for (int ei : a_.out_edges()[static_cast<std::size_t>(loc)]) {
      const TaEdge& e = a_.edge(ei);
      if (!layout_.satisfies(r, e.guard)) continue;
      Region s = r;
      for (int c : e.resets) layout_.reset(s, c);
      layout_.compact(s);
      if (!layout_.satisfies(s, a_.invariant(e.dst))) continue;
      if (options_.reduce_inactive) layout_.reduce(s, active_[static_cast<std::size_t>(e.dst)]);
      out.push_back({e.dst, ei, std::move(s)});
    }
    return out;
  }

  void add_all(int node, const std::vector<Successor>& succ) {
    for (const auto& s : succ) {
      int dst = intern(s.loc, s.region);
      g_.add_edge(node, dst, s.ta_edge);
    }
  }

  void expand_fifo() {
    for (int node = 0; node < g_.num_nodes(); ++node) add_all(node, successors(node));
  }

  void expand_levels() {
    int begin = 0;
    while (begin < g_.num_nodes()) {
      int end = g_.num_nodes();
      std::vector<std::vector<Successor>> level(static_cast<std::size_t>(end - begin));
#pragma omp parallel for schedule(dynamic, 64)
      for (int node = begin; node < end; ++node) level[static_cast<std::size_t>(node - begin)] = successors(node);
      for (int node = begin; node < end; ++node) add_all(node, level[static_cast<std::size_t>(node - begin)]);
      begin = end;
    }
  }

  const TimedAutomaton& a_;
  RegionGraphOptions options_;
  Layout layout_;
  std::vector<std::vector<bool>> active_;
  RegionGraph g_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace

RegionGraph region_graph(const TimedAutomaton& a, const RegionGraphOptions& options) {
  return Builder(a, options).run();
}

std::vector<std::int16_t> region_of(const std::vector<Rational>& v, const std::vector<long long>& max) {
  const int n = static_cast<int>(v.size());
  Layout layout{n, max};
  Region r(2 * static_cast<std::size_t>(n), 0);
  std::vector<std::pair<Rational, int>> fracs;
  for (int c = 0; c < n; ++c) {
    const Rational& x = v[static_cast<std::size_t>(c)];
    Rational whole = floor_div(x);
    if (x > Rational(max[static_cast<std::size_t>(c)])) {
      layout.set_above(r, c);
      continue;
    }
    layout.ipart(r, c) = static_cast<std::int16_t>(whole.numerator());
    if (x != whole) fracs.emplace_back(x - whole, c);
  }
  std::sort(fracs.begin(), fracs.end());
  std::int16_t rank = 0;
  for (std::size_t i = 0; i < fracs.size(); ++i) {
    if (i == 0 || fracs[i].first != fracs[i - 1].first) ++rank;
    layout.rank(r, fracs[i].second) = rank;
  }
  return r;
}

std::vector<Rational> region_representative(const RegionGraph& g, int node) {
  auto r = g.region(node);
  const int n = g.clocks;
  std::int16_t top = 0;
  for (int c = 0; c < n; ++c) top = std::max(top, r[static_cast<std::size_t>(n + c)]);
  std::vector<Rational> v(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    std::int16_t rank = r[static_cast<std::size_t>(n + c)];
    if (rank < 0)
      v[static_cast<std::size_t>(c)] = Rational(g.max_constants[static_cast<std::size_t>(c)] + 1);
    else
      v[static_cast<std::size_t>(c)] = Rational(r[static_cast<std::size_t>(c)]) + Rational(rank, top + 1);
  }
  return v;
}

std::string describe_region(const RegionGraph& g, int node, const std::vector<std::string>& names) {
  auto r = g.region(node);
  const int n = g.clocks;
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << ", ";
    first = false;
  };
  std::map<int, std::vector<int>> by_rank;
  for (int c = 0; c < n; ++c) {
    std::int16_t ip = r[static_cast<std::size_t>(c)], rank = r[static_cast<std::size_t>(n + c)];
    sep();
    const std::string& x = names.at(static_cast<std::size_t>(c));
    if (rank < 0)
      out << x << ">" << g.max_constants[static_cast<std::size_t>(c)];
    else if (rank == 0)
      out << x << "=" << ip;
    else {
      out << ip << "<" << x << "<" << ip + 1;
      by_rank[rank].push_back(c);
    }
  }
  std::string prev;
  for (const auto& [rank, cs] : by_rank) {
    std::string group;
    for (int c : cs) group += (group.empty() ? "" : "=") + ("frac(" + names.at(static_cast<std::size_t>(c)) + ")");
    if (!prev.empty()) {
      sep();
      out << prev << "<" << group;
    } else if (cs.size() > 1) {
      sep();
      out << group;
    }
    prev = group;
  }
  return out.str();
}

std::vector<int> silent_cycles(const RegionGraph& g, const TimedAutomaton& a) {
  std::vector<bool> mask(g.edges.size(), false);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    int e = g.edges[i].ta_edge;
    mask[i] = e < 0 || !a.alphabet().observable(a.edge(e).label);
  }
  int count = 0;
  auto comp = strongly_connected_components(g, &mask, &count);
  // A component counts when it holds a discrete edge kept by the mask.
  std::vector<int> witness(static_cast<std::size_t>(count), -1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!mask[i] || e.ta_edge < 0) continue;
    int cs = comp[static_cast<std::size_t>(e.src)];
    if (cs >= 0 && cs == comp[static_cast<std::size_t>(e.dst)] && witness[static_cast<std::size_t>(cs)] < 0)
      witness[static_cast<std::size_t>(cs)] = e.src;
  }
  std::vector<int> out;
  for (int w : witness)
    if (w >= 0) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

std::string region_graph_dot(const RegionGraph& g, const TimedAutomaton& a) {
  std::ostringstream out;
  out << "digraph regions {\n";
  for (int v = 0; v < g.num_nodes(); ++v) {
    out << "  n" << v << " [label=\"" << a.location_name(g.location[static_cast<std::size_t>(v)]) << "\\n"
        << describe_region(g, v, a.clock_names()) << "\"";
    if (g.repeated[static_cast<std::size_t>(v)]) out << ", peripheries=2";
    if (v == g.initial) out << ", style=bold";
    out << "];\n";
  }
  for (const auto& e : g.edges) {
    out << "  n" << e.src << " -> n" << e.dst << " [label=\"";
    if (e.ta_edge < 0)
      out << "delay";
    else
      out << a.alphabet().name(a.edge(e.ta_edge).label);
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tapred
