#pragma once

#include "tapred/alphabet.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tapred {

struct FaEdge {
  int src = 0;
  EventId label = kEpsilon;
  int dst = 0;
  /// Index of the edge this one was copied from, -1 when it has no source.
  int origin = -1;
};

/// Finite automaton over an EventAlphabet with silent edges, final set F
/// and repeated set R. Locations keep insertion order.
class FiniteAutomaton {
 public:
  FiniteAutomaton() = default;
  explicit FiniteAutomaton(EventAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const EventAlphabet& alphabet() const { return alphabet_; }

  int add_location(const std::string& name);
  std::optional<int> find_location(const std::string& name) const;
  int location(const std::string& name) const;
  const std::string& location_name(int l) const { return names_.at(static_cast<std::size_t>(l)); }
  const std::vector<std::string>& location_names() const { return names_; }
  int num_locations() const { return static_cast<int>(names_.size()); }

  void set_initial(int l);
  int initial() const { return initial_; }

  int add_edge(int src, EventId label, int dst, int origin = -1);
  const std::vector<FaEdge>& edges() const { return edges_; }
  /// Outgoing edge indices per location, in edge order.
  const std::vector<std::vector<int>>& out_edges() const { return out_; }

  void set_final(int l, bool value = true) { final_.at(static_cast<std::size_t>(l)) = value; }
  void set_repeated(int l, bool value = true) { repeated_.at(static_cast<std::size_t>(l)) = value; }
  bool is_final(int l) const { return final_.at(static_cast<std::size_t>(l)); }
  bool is_repeated(int l) const { return repeated_.at(static_cast<std::size_t>(l)); }

 private:
  EventAlphabet alphabet_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  int initial_ = 0;
  std::vector<FaEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<bool> final_;
  std::vector<bool> repeated_;
};

/// A word over the alphabet with silent steps erased; duration counts them.
struct UntimedWord {
  std::vector<EventId> events;
  std::size_t duration = 0;

  friend bool operator==(const UntimedWord&, const UntimedWord&) = default;
};

inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

struct FaProduct {
  FiniteAutomaton automaton;
  /// Component locations of every product location.
  std::vector<std::pair<int, int>> states;
  /// Component edge indices of every product edge; -1 where a side stays put.
  std::vector<std::pair<int, int>> edge_parts;
};

/// Synchronous product on non-silent labels; silent moves interleave.
/// Only pairs reachable from the initial pair are built.
FaProduct fa_product(const FiniteAutomaton& a, const FiniteAutomaton& b);

FiniteAutomaton hide_unobservable(const FiniteAutomaton& a);

std::vector<int> fault_enabled_states(const FiniteAutomaton& a);

/// Shortest number of non-fault steps to a fault-enabled location.
std::vector<int> backward_distance_df(const FiniteAutomaton& a);

using EdgeFilter = std::function<bool(const FaEdge&)>;

std::vector<bool> forward_reachable(const FiniteAutomaton& a, const std::vector<int>& sources,
                                    const EdgeFilter& keep = {});
std::vector<bool> backward_reachable(const FiniteAutomaton& a, const std::vector<int>& targets,
                                     const EdgeFilter& keep = {});

/// Shortest edge path (BFS order, edges tried in index order) from `from`
/// to any location satisfying `goal`. Empty optional when none exists.
std::optional<std::vector<int>> shortest_path(const FiniteAutomaton& a, int from,
                                              const std::function<bool(int)>& goal,
                                              const EdgeFilter& keep = {});

UntimedWord word_of_path(const FiniteAutomaton& a, const std::vector<int>& edges);

/// Erases events outside the observable alphabet.
std::vector<EventId> project(const EventAlphabet& alphabet, const std::vector<EventId>& events);

}  // namespace tapred
