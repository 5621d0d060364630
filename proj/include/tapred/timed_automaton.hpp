#pragma once

#include "tapred/alphabet.hpp"
#include "tapred/clock_constraint.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tapred {

/// What an edge of a derived automaton stands for. Plain models only use
/// Original.
enum class EdgeRole { Original, Switch, Twin, FaultEnd, TwinLoop, EndLoop, Gadget, SamplerTick, Product };

struct TaEdge {
  int src = 0;
  ClockConstraint guard;
  EventId label = kEpsilon;
  std::vector<int> resets;
  int dst = 0;
  EdgeRole role = EdgeRole::Original;
  /// Edge of the automaton this one was derived from, -1 if none.
  int origin = -1;

  bool resets_clock(int c) const;
};

class TimedAutomaton {
 public:
  TimedAutomaton() = default;
  explicit TimedAutomaton(EventAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const EventAlphabet& alphabet() const { return alphabet_; }
  EventAlphabet& mutable_alphabet() { return alphabet_; }

  int add_clock(const std::string& name);
  std::optional<int> find_clock(const std::string& name) const;
  int num_clocks() const { return static_cast<int>(clocks_.size()); }
  const std::vector<std::string>& clock_names() const { return clocks_; }
  const std::string& clock_name(int c) const { return clocks_.at(static_cast<std::size_t>(c)); }

  int add_location(const std::string& name);
  std::optional<int> find_location(const std::string& name) const;
  int location(const std::string& name) const;
  int num_locations() const { return static_cast<int>(names_.size()); }
  const std::string& location_name(int l) const { return names_.at(static_cast<std::size_t>(l)); }
  const std::vector<std::string>& location_names() const { return names_; }

  void set_initial(int l);
  int initial() const { return initial_; }

  int add_edge(TaEdge edge);
  const std::vector<TaEdge>& edges() const { return edges_; }
  const TaEdge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<std::vector<int>>& out_edges() const { return out_; }

  const ClockConstraint& invariant(int l) const { return invariants_.at(static_cast<std::size_t>(l)); }
  void set_invariant(int l, ClockConstraint c);

  void set_final(int l, bool value = true) { final_.at(static_cast<std::size_t>(l)) = value; }
  void set_repeated(int l, bool value = true) { repeated_.at(static_cast<std::size_t>(l)) = value; }
  bool is_final(int l) const { return final_.at(static_cast<std::size_t>(l)); }
  bool is_repeated(int l) const { return repeated_.at(static_cast<std::size_t>(l)); }

  /// Largest constant compared against each clock in guards and invariants.
  std::vector<long long> max_constants() const;

 private:
  void check_constraint(const ClockConstraint& c) const;

  EventAlphabet alphabet_;
  std::vector<std::string> clocks_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  int initial_ = 0;
  std::vector<TaEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<ClockConstraint> invariants_;
  std::vector<bool> final_;
  std::vector<bool> repeated_;
};

/// Locations reachable in the untimed graph of `a` (guards ignored).
std::vector<bool> graph_reachable(const TimedAutomaton& a, bool skip_fault_edges = false);

/// Locations whose invariant bounds no clock from above.
std::vector<int> unbounded_locations(const TimedAutomaton& a);

/// Per location, the clocks whose value can still influence the future:
/// read by the invariant or an outgoing guard, or live at a successor
/// without being reset on the way.
std::vector<std::vector<bool>> active_clocks(const TimedAutomaton& a);

bool has_fault_edge(const TimedAutomaton& a);

}  // namespace tapred
