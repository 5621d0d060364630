#include "tapred/timed_automaton.hpp"

#include "tapred/errors.hpp"

#include <algorithm>

namespace tapred {

bool TaEdge::resets_clock(int c) const { return std::find(resets.begin(), resets.end(), c) != resets.end(); }

int TimedAutomaton::add_clock(const std::string& name) {
  if (find_clock(name)) throw InputError("clock '" + name + "' declared twice");
  clocks_.push_back(name);
  return num_clocks() - 1;
}

std::optional<int> TimedAutomaton::find_clock(const std::string& name) const {
  auto it = std::find(clocks_.begin(), clocks_.end(), name);
  if (it == clocks_.end()) return std::nullopt;
  return static_cast<int>(it - clocks_.begin());
}

int TimedAutomaton::add_location(const std::string& name) {
  if (index_.count(name)) throw InputError("location '" + name + "' declared twice");
  int id = num_locations();
  names_.push_back(name);
  index_.emplace(name, id);
  out_.emplace_back();
  invariants_.emplace_back();
  final_.push_back(false);
  repeated_.push_back(false);
  return id;
}

std::optional<int> TimedAutomaton::find_location(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int TimedAutomaton::location(const std::string& name) const {
  if (auto l = find_location(name)) return *l;
  throw InputError("unknown location '" + name + "'");
}

void TimedAutomaton::set_initial(int l) {
  if (l < 0 || l >= num_locations()) throw InputError("initial location out of range");
  initial_ = l;
}

void TimedAutomaton::check_constraint(const ClockConstraint& c) const {
  for (const auto& a : c.atoms) {
    if (a.clock < 0 || a.clock >= num_clocks()) throw InputError("constraint on undeclared clock");
    if (a.constant < 0) throw InputError("negative clock constant");
  }
}

int TimedAutomaton::add_edge(TaEdge edge) {
  if (edge.src < 0 || edge.src >= num_locations() || edge.dst < 0 || edge.dst >= num_locations())
    throw InputError("edge endpoint out of range");
  if (edge.label != kEpsilon && (edge.label < 0 || static_cast<std::size_t>(edge.label) >= alphabet_.size()))
    throw InputError("edge label out of range");
  check_constraint(edge.guard);
  for (int c : edge.resets)
    if (c < 0 || c >= num_clocks()) throw InputError("reset of undeclared clock");
  std::sort(edge.resets.begin(), edge.resets.end());
  edge.resets.erase(std::unique(edge.resets.begin(), edge.resets.end()), edge.resets.end());
  int id = static_cast<int>(edges_.size());
  out_[static_cast<std::size_t>(edge.src)].push_back(id);
  edges_.push_back(std::move(edge));
  return id;
}

void TimedAutomaton::set_invariant(int l, ClockConstraint c) {
  check_constraint(c);
  for (const auto& a : c.atoms)
    if (a.rel != Rel::Lt && a.rel != Rel::Le)
      throw InputError("invariant of '" + location_name(l) + "' uses a relation other than < or <=");
  invariants_.at(static_cast<std::size_t>(l)) = std::move(c);
}

std::vector<long long> TimedAutomaton::max_constants() const {
  std::vector<long long> m(static_cast<std::size_t>(num_clocks()), 0);
  auto scan = [&](const ClockConstraint& c) {
    for (const auto& a : c.atoms) m[static_cast<std::size_t>(a.clock)] = std::max(m[static_cast<std::size_t>(a.clock)], a.constant);
  };
  for (const auto& e : edges_) scan(e.guard);
  for (const auto& inv : invariants_) scan(inv);
  return m;
}

std::vector<bool> graph_reachable(const TimedAutomaton& a, bool skip_fault_edges) {
  std::vector<bool> seen(static_cast<std::size_t>(a.num_locations()), false);
  if (a.num_locations() == 0) return seen;
  std::vector<int> stack{a.initial()};
  seen[static_cast<std::size_t>(a.initial())] = true;
  while (!stack.empty()) {
    int l = stack.back();
    stack.pop_back();
    for (int ei : a.out_edges()[static_cast<std::size_t>(l)]) {
      const TaEdge& e = a.edge(ei);
      if (skip_fault_edges && a.alphabet().is_fault(e.label)) continue;
      if (seen[static_cast<std::size_t>(e.dst)]) continue;
      seen[static_cast<std::size_t>(e.dst)] = true;
      stack.push_back(e.dst);
    }
  }
  return seen;
}

std::vector<int> unbounded_locations(const TimedAutomaton& a) {
  std::vector<int> out;
  for (int l = 0; l < a.num_locations(); ++l)
    if (!a.invariant(l).has_upper_bound()) out.push_back(l);
  return out;
}

std::vector<std::vector<bool>> active_clocks(const TimedAutomaton& a) {
  const auto n = static_cast<std::size_t>(a.num_locations());
  const auto k = static_cast<std::size_t>(a.num_clocks());
  std::vector<std::vector<bool>> act(n, std::vector<bool>(k, false));
  for (std::size_t l = 0; l < n; ++l) {
    for (const auto& at : a.invariant(static_cast<int>(l)).atoms) act[l][static_cast<std::size_t>(at.clock)] = true;
    for (int ei : a.out_edges()[l])
      for (const auto& at : a.edge(ei).guard.atoms) act[l][static_cast<std::size_t>(at.clock)] = true;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : a.edges()) {
      auto& src = act[static_cast<std::size_t>(e.src)];
      const auto& dst = act[static_cast<std::size_t>(e.dst)];
      for (std::size_t c = 0; c < k; ++c) {
        if (src[c] || !dst[c] || e.resets_clock(static_cast<int>(c))) continue;
        src[c] = true;
        changed = true;
      }
    }
  }
  return act;
}

bool has_fault_edge(const TimedAutomaton& a) {
  for (const auto& e : a.edges())
    if (a.alphabet().is_fault(e.label)) return true;
  return false;
}

}  // namespace tapred
