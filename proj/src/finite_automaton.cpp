#include "tapred/finite_automaton.hpp"

#include "tapred/errors.hpp"

#include <deque>
#include <map>

namespace tapred {

int FiniteAutomaton::add_location(const std::string& name) {
  if (index_.count(name)) throw InputError("location '" + name + "' declared twice");
  int id = num_locations();
  names_.push_back(name);
  index_.emplace(name, id);
  out_.emplace_back();
  final_.push_back(false);
  repeated_.push_back(false);
  return id;
}

std::optional<int> FiniteAutomaton::find_location(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FiniteAutomaton::location(const std::string& name) const {
  if (auto l = find_location(name)) return *l;
  throw InputError("unknown location '" + name + "'");
}

void FiniteAutomaton::set_initial(int l) {
  if (l < 0 || l >= num_locations()) throw InputError("initial location out of range");
  initial_ = l;
}

int FiniteAutomaton::add_edge(int src, EventId label, int dst, int origin) {
  if (src < 0 || src >= num_locations() || dst < 0 || dst >= num_locations())
    throw InputError("edge endpoint out of range");
  if (label != kEpsilon && (label < 0 || static_cast<std::size_t>(label) >= alphabet_.size()))
    throw InputError("edge label out of range");
  int id = static_cast<int>(edges_.size());
  edges_.push_back({src, label, dst, origin});
  out_[static_cast<std::size_t>(src)].push_back(id);
  return id;
}

FaProduct fa_product(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (!(a.alphabet() == b.alphabet())) throw InputError("product of automata over different alphabets");
  FaProduct p;
  p.automaton = FiniteAutomaton(a.alphabet());
  std::map<std::pair<int, int>, int> ids;
  std::deque<int> queue;

  auto intern = [&](int s, int t) {
    auto [it, fresh] = ids.emplace(std::pair{s, t}, p.automaton.num_locations());
    if (fresh) {
      int id = p.automaton.add_location("(" + a.location_name(s) + "," + b.location_name(t) + ")");
      p.automaton.set_final(id, a.is_final(s) && b.is_final(t));
      p.automaton.set_repeated(id, a.is_repeated(s) && b.is_repeated(t));
      p.states.emplace_back(s, t);
      queue.push_back(id);
    }
    return it->second;
  };

  p.automaton.set_initial(intern(a.initial(), b.initial()));
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    auto [s, t] = p.states[static_cast<std::size_t>(id)];
    for (int ea : a.out_edges()[static_cast<std::size_t>(s)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ea)];
      if (e.label == kEpsilon) {
        p.automaton.add_edge(id, kEpsilon, intern(e.dst, t));
        p.edge_parts.emplace_back(ea, -1);
        continue;
      }
      for (int eb : b.out_edges()[static_cast<std::size_t>(t)]) {
        const FaEdge& f = b.edges()[static_cast<std::size_t>(eb)];
        if (f.label != e.label) continue;
        p.automaton.add_edge(id, e.label, intern(e.dst, f.dst));
        p.edge_parts.emplace_back(ea, eb);
      }
    }
    for (int eb : b.out_edges()[static_cast<std::size_t>(t)]) {
      const FaEdge& f = b.edges()[static_cast<std::size_t>(eb)];
      if (f.label != kEpsilon) continue;
      p.automaton.add_edge(id, kEpsilon, intern(s, f.dst));
      p.edge_parts.emplace_back(-1, eb);
    }
  }
  return p;
}

FiniteAutomaton hide_unobservable(const FiniteAutomaton& a) {
  FiniteAutomaton out(a.alphabet());
  for (int l = 0; l < a.num_locations(); ++l) {
    out.add_location(a.location_name(l));
    out.set_final(l, a.is_final(l));
    out.set_repeated(l, a.is_repeated(l));
  }
  out.set_initial(a.initial());
  for (const FaEdge& e : a.edges()) {
    EventId label = a.alphabet().observable(e.label) ? e.label : kEpsilon;
    out.add_edge(e.src, label, e.dst, e.origin);
  }
  return out;
}

std::vector<int> fault_enabled_states(const FiniteAutomaton& a) {
  std::vector<int> out;
  for (int l = 0; l < a.num_locations(); ++l) {
    for (int e : a.out_edges()[static_cast<std::size_t>(l)]) {
      if (a.alphabet().is_fault(a.edges()[static_cast<std::size_t>(e)].label)) {
        out.push_back(l);
        break;
      }
    }
  }
  return out;
}

std::vector<int> backward_distance_df(const FiniteAutomaton& a) {
  const auto n = static_cast<std::size_t>(a.num_locations());
  std::vector<std::vector<int>> preds(n);
  for (const FaEdge& e : a.edges())
    if (!a.alphabet().is_fault(e.label)) preds[static_cast<std::size_t>(e.dst)].push_back(e.src);

  std::vector<int> dist(n, kInfiniteDistance);
  std::deque<int> queue;
  for (int l : fault_enabled_states(a)) {
    dist[static_cast<std::size_t>(l)] = 0;
    queue.push_back(l);
  }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int p : preds[static_cast<std::size_t>(q)]) {
      if (dist[static_cast<std::size_t>(p)] != kInfiniteDistance) continue;
      dist[static_cast<std::size_t>(p)] = dist[static_cast<std::size_t>(q)] + 1;
      queue.push_back(p);
    }
  }
  return dist;
}

std::vector<bool> forward_reachable(const FiniteAutomaton& a, const std::vector<int>& sources,
                                    const EdgeFilter& keep) {
  std::vector<bool> seen(static_cast<std::size_t>(a.num_locations()), false);
  std::vector<int> stack;
  for (int s : sources) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (keep && !keep(e)) continue;
      if (seen[static_cast<std::size_t>(e.dst)]) continue;
      seen[static_cast<std::size_t>(e.dst)] = true;
      stack.push_back(e.dst);
    }
  }
  return seen;
}

std::vector<bool> backward_reachable(const FiniteAutomaton& a, const std::vector<int>& targets,
                                     const EdgeFilter& keep) {
  const auto n = static_cast<std::size_t>(a.num_locations());
  std::vector<std::vector<int>> preds(n);
  for (const FaEdge& e : a.edges())
    if (!keep || keep(e)) preds[static_cast<std::size_t>(e.dst)].push_back(e.src);
  std::vector<bool> seen(n, false);
  std::vector<int> stack;
  for (int t : targets) {
    if (!seen[static_cast<std::size_t>(t)]) {
      seen[static_cast<std::size_t>(t)] = true;
      stack.push_back(t);
    }
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : preds[static_cast<std::size_t>(q)]) {
      if (seen[static_cast<std::size_t>(p)]) continue;
      seen[static_cast<std::size_t>(p)] = true;
      stack.push_back(p);
    }
  }
  return seen;
}

std::optional<std::vector<int>> shortest_path(const FiniteAutomaton& a, int from,
                                              const std::function<bool(int)>& goal,
                                              const EdgeFilter& keep) {
  const auto n = static_cast<std::size_t>(a.num_locations());
  std::vector<int> parent_edge(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<int> queue{from};
  seen[static_cast<std::size_t>(from)] = true;
  int hit = -1;
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    if (goal(q)) {
      hit = q;
      break;
    }
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (keep && !keep(e)) continue;
      if (seen[static_cast<std::size_t>(e.dst)]) continue;
      seen[static_cast<std::size_t>(e.dst)] = true;
      parent_edge[static_cast<std::size_t>(e.dst)] = ei;
      queue.push_back(e.dst);
    }
  }
  if (hit < 0) return std::nullopt;
  std::vector<int> path;
  for (int q = hit; q != from;) {
    int ei = parent_edge[static_cast<std::size_t>(q)];
    path.push_back(ei);
    q = a.edges()[static_cast<std::size_t>(ei)].src;
  }
  return std::vector<int>(path.rbegin(), path.rend());
}

UntimedWord word_of_path(const FiniteAutomaton& a, const std::vector<int>& edges) {
  UntimedWord w;
  for (int ei : edges) {
    EventId label = a.edges()[static_cast<std::size_t>(ei)].label;
    if (label != kEpsilon) w.events.push_back(label);
    ++w.duration;
  }
  return w;
}

std::vector<EventId> project(const EventAlphabet& alphabet, const std::vector<EventId>& events) {
  std::vector<EventId> out;
  for (EventId e : events)
    if (alphabet.observable(e)) out.push_back(e);
  return out;
}

}  // namespace tapred
