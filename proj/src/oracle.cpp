#include "tapred/oracle.hpp"

#include "tapred/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tapred::oracle {

namespace {

using StateSet = std::vector<bool>;

void require_small(const FiniteAutomaton& a) {
  if (a.num_locations() > kLocationCap)
    throw InputError("oracle refuses automata with more than " + std::to_string(kLocationCap) + " locations");
}

bool silent(const FiniteAutomaton& a, EventId e) { return e == kEpsilon || !a.alphabet().observable(e); }

// Fault-free closure under silent moves (unobservable or eps).
StateSet hidden_closure(const FiniteAutomaton& a, StateSet s) {
  std::vector<int> todo;
  for (int q = 0; q < a.num_locations(); ++q)
    if (s[static_cast<std::size_t>(q)]) todo.push_back(q);
  while (!todo.empty()) {
    int q = todo.back();
    todo.pop_back();
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (a.alphabet().is_fault(e.label) || !silent(a, e.label)) continue;
      if (!s[static_cast<std::size_t>(e.dst)]) {
        s[static_cast<std::size_t>(e.dst)] = true;
        todo.push_back(e.dst);
      }
    }
  }
  return s;
}

StateSet observe(const FiniteAutomaton& a, const StateSet& s, EventId o) {
  StateSet next(s.size(), false);
  for (const FaEdge& e : a.edges())
    if (e.label == o && s[static_cast<std::size_t>(e.src)]) next[static_cast<std::size_t>(e.dst)] = true;
  return hidden_closure(a, std::move(next));
}

bool fault_enabled(const FiniteAutomaton& a, int q) {
  for (int ei : a.out_edges()[static_cast<std::size_t>(q)])
    if (a.alphabet().is_fault(a.edges()[static_cast<std::size_t>(ei)].label)) return true;
  return false;
}

// Locations from which a fault-enabled one is reached in at most k
// fault-free steps.
StateSet within_k(const FiniteAutomaton& a, int k) {
  StateSet r(static_cast<std::size_t>(a.num_locations()));
  for (int q = 0; q < a.num_locations(); ++q) r[static_cast<std::size_t>(q)] = fault_enabled(a, q);
  for (int i = 0; i < k; ++i) {
    StateSet next = r;
    for (const FaEdge& e : a.edges())
      if (!a.alphabet().is_fault(e.label) && r[static_cast<std::size_t>(e.dst)]) next[static_cast<std::size_t>(e.src)] = true;
    r = std::move(next);
  }
  return r;
}

// Locations with a fault-free path of exactly n steps.
StateSet fault_free_path(const FiniteAutomaton& a, int n) {
  StateSet r(static_cast<std::size_t>(a.num_locations()), true);
  for (int i = 0; i < n; ++i) {
    StateSet next(r.size(), false);
    for (const FaEdge& e : a.edges())
      if (!a.alphabet().is_fault(e.label) && r[static_cast<std::size_t>(e.dst)]) next[static_cast<std::size_t>(e.src)] = true;
    r = std::move(next);
  }
  return r;
}

bool meets(const StateSet& s, const StateSet& t) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] && t[i]) return true;
  return false;
}

StateSet initial_set(const FiniteAutomaton& a) {
  StateSet s(static_cast<std::size_t>(a.num_locations()), false);
  if (a.num_locations() > 0) s[static_cast<std::size_t>(a.initial())] = true;
  return hidden_closure(a, std::move(s));
}

}  // namespace

bool fa_oracle_k_predictable(const FiniteAutomaton& a, int k) {
  require_small(a);
  if (a.num_locations() == 0) return true;
  const int n = a.num_locations();
  // A confusing pair of runs is an accepted word of a twin plant with at
  // most n*n states, so its observation is no longer than that; k + 1
  // covers the trailing steps to the fault.
  const int bound = n * n + k + 1;
  const StateSet fk = within_k(a, k);
  const StateSet live = fault_free_path(a, n);
  std::vector<EventId> obs = a.alphabet().observable_events();
  std::deque<std::pair<StateSet, int>> queue{{initial_set(a), 0}};
  std::set<StateSet> seen{queue.front().first};
  while (!queue.empty()) {
    auto [s, depth] = queue.front();
    queue.pop_front();
    if (meets(s, fk) && meets(s, live)) return false;
    if (depth == bound) continue;
    for (EventId o : obs) {
      if (a.alphabet().is_fault(o)) continue;
      StateSet next = observe(a, s, o);
      if (std::none_of(next.begin(), next.end(), [](bool b) { return b; })) continue;
      if (seen.insert(next).second) queue.emplace_back(std::move(next), depth + 1);
    }
  }
  return true;
}

bool gl_oracle(const FiniteAutomaton& a) {
  require_small(a);
  if (a.num_locations() == 0) return true;
  const int n = a.num_locations();
  // A fault-free continuation of length n*n >= n contains a cycle, so it
  // exists iff an infinite one does; larger n changes nothing.
  const StateSet escape = fault_free_path(a, n * n);
  // Search prefaulty traces w along which no prefix t satisfies P(t). The
  // state is the location of w's run and the explanation set of pi(t).
  using Node = std::pair<int, StateSet>;
  Node start{a.initial(), initial_set(a)};
  if (!meets(start.second, escape)) return true;
  std::deque<Node> queue{start};
  std::set<Node> seen{start};
  while (!queue.empty()) {
    auto [q, s] = queue.front();
    queue.pop_front();
    if (fault_enabled(a, q)) return false;
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (a.alphabet().is_fault(e.label)) continue;
      Node next{e.dst, silent(a, e.label) ? s : observe(a, s, e.label)};
      if (!meets(next.second, escape)) continue;
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return true;
}

namespace {

StateSet eps_closure(const FiniteAutomaton& a, StateSet s) {
  std::vector<int> todo;
  for (int q = 0; q < a.num_locations(); ++q)
    if (s[static_cast<std::size_t>(q)]) todo.push_back(q);
  while (!todo.empty()) {
    int q = todo.back();
    todo.pop_back();
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (e.label == kEpsilon && !s[static_cast<std::size_t>(e.dst)]) {
        s[static_cast<std::size_t>(e.dst)] = true;
        todo.push_back(e.dst);
      }
    }
  }
  return s;
}

// Fault-free runs reading exactly `events` (eps edges interleaved).
StateSet replay_word(const FiniteAutomaton& a, StateSet s, const std::vector<EventId>& events) {
  s = eps_closure(a, std::move(s));
  for (EventId ev : events) {
    StateSet next(s.size(), false);
    for (const FaEdge& e : a.edges())
      if (e.label == ev && s[static_cast<std::size_t>(e.src)]) next[static_cast<std::size_t>(e.dst)] = true;
    s = eps_closure(a, std::move(next));
  }
  return s;
}

bool any(const StateSet& s) { return std::any_of(s.begin(), s.end(), [](bool b) { return b; }); }

}  // namespace

Check validate_witness(const FiniteAutomaton& a, int k, const FaWitness& w) {
  const EventAlphabet& al = a.alphabet();
  auto fault_free = [&](const UntimedWord& u, const char* what) -> Check {
    for (std::size_t i = 0; i < u.events.size(); ++i)
      if (al.is_fault(u.events[i])) return Check::fail(std::string(what) + ": fault at step " + std::to_string(i));
    if (u.duration < u.events.size()) return Check::fail(std::string(what) + ": duration shorter than its events");
    return {};
  };
  for (auto [u, what] : {std::pair{&w.prefaulty, "prefaulty"}, {&w.stem, "stem"}, {&w.cycle, "cycle"}})
    if (Check c = fault_free(*u, what); !c.ok) return c;

  StateSet init(static_cast<std::size_t>(a.num_locations()), false);
  init[static_cast<std::size_t>(a.initial())] = true;
  StateSet end = replay_word(a, init, w.prefaulty.events);
  if (!any(end)) return Check::fail("prefaulty: word is not a run");
  if (!meets(end, within_k(a, k))) return Check::fail("prefaulty: no fault within " + std::to_string(k) + " steps");

  StateSet stem_end = replay_word(a, init, w.stem.events);
  if (!any(stem_end)) return Check::fail("stem: word is not a run");
  if (w.cycle.duration == 0) return Check::fail("cycle: empty");
  // Successor relation of one pass around the cycle.
  auto pass = [&](int q) {
    StateSet s(static_cast<std::size_t>(a.num_locations()), false);
    s[static_cast<std::size_t>(q)] = true;
    if (!w.cycle.events.empty()) return replay_word(a, s, w.cycle.events);
    StateSet next(s.size(), false);
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)])
      if (const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)]; e.label == kEpsilon) next[static_cast<std::size_t>(e.dst)] = true;
    return eps_closure(a, std::move(next));
  };
  std::vector<StateSet> succ;
  for (int q = 0; q < a.num_locations(); ++q) succ.push_back(pass(q));
  // Some location reachable from the stem end by passes lies on a pass cycle.
  StateSet reach = stem_end;
  for (bool grew = true; grew;) {
    grew = false;
    for (int q = 0; q < a.num_locations(); ++q)
      if (reach[static_cast<std::size_t>(q)])
        for (int r = 0; r < a.num_locations(); ++r)
          if (succ[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] && !reach[static_cast<std::size_t>(r)])
            reach[static_cast<std::size_t>(r)] = grew = true;
  }
  bool lasso = false;
  for (int q = 0; q < a.num_locations() && !lasso; ++q) {
    if (!reach[static_cast<std::size_t>(q)]) continue;
    StateSet from = succ[static_cast<std::size_t>(q)];
    for (bool grew = true; grew;) {
      grew = false;
      for (int r = 0; r < a.num_locations(); ++r)
        if (from[static_cast<std::size_t>(r)])
          for (int s = 0; s < a.num_locations(); ++s)
            if (succ[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] && !from[static_cast<std::size_t>(s)])
              from[static_cast<std::size_t>(s)] = grew = true;
    }
    lasso = from[static_cast<std::size_t>(q)];
  }
  if (!lasso) return Check::fail("cycle: no fault-free run repeats it after the stem");

  std::vector<EventId> target = project(al, w.prefaulty.events);
  std::vector<EventId> seen = project(al, w.stem.events);
  std::vector<EventId> loop = project(al, w.cycle.events);
  for (std::size_t m = 0; seen.size() < target.size() && m <= target.size() && !loop.empty(); ++m)
    seen.insert(seen.end(), loop.begin(), loop.end());
  if (seen.size() < target.size() || !std::equal(target.begin(), target.end(), seen.begin()))
    return Check::fail("observation of the prefaulty word is not a prefix of the lasso's");
  return {};
}

std::vector<FaWitness> mutate(const FiniteAutomaton& a, const FaWitness& w) {
  std::vector<FaWitness> out;
  if (!w.prefaulty.events.empty()) {
    FaWitness m = w;
    m.prefaulty.events.erase(m.prefaulty.events.begin());
    m.prefaulty.duration -= 1;
    out.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < w.prefaulty.events.size(); ++i) {
    if (!a.alphabet().observable(w.prefaulty.events[i])) continue;
    for (EventId e : a.alphabet().observable_events()) {
      if (e == w.prefaulty.events[i] || a.alphabet().is_fault(e)) continue;
      FaWitness m = w;
      m.prefaulty.events[i] = e;
      out.push_back(std::move(m));
      break;
    }
    break;
  }
  FaWitness emptied = w;
  emptied.cycle = {};
  emptied.cycle_edges.clear();
  out.push_back(std::move(emptied));
  return out;
}

namespace {

std::string where(const char* part, const ReplayResult& r) {
  return std::string(part) + ": step " + std::to_string(r.failed_step) + ": " + r.error;
}

TimedRun prefix(const TimedRun& run, std::size_t steps, const Rational& until) {
  TimedRun p;
  p.steps.assign(run.steps.begin(), run.steps.begin() + static_cast<std::ptrdiff_t>(std::min(steps, run.steps.size())));
  p.tail = until - p.duration();
  return p;
}

}  // namespace

Check validate_witness(const NormalizedTA& n, long long bound, const TaWitness& w, bool divergence) {
  const TimedAutomaton& a = n.automaton;
  const EventAlphabet& al = a.alphabet();
  auto uses_fault = [&](const TimedRun& r) {
    return std::any_of(r.steps.begin(), r.steps.end(), [&](const TimedStep& s) {
      return s.edge < 0 || s.edge >= static_cast<int>(a.edges().size()) || al.is_fault(a.edge(s.edge).label);
    });
  };
  if (uses_fault(w.prefaulty)) return Check::fail("prefaulty: fault or unknown edge");
  ReplayResult pre = replay(a, w.prefaulty);
  if (!pre.ok) return Check::fail(where("prefaulty", pre));
  if (w.prefaulty.duration() != w.switch_time) return Check::fail("prefaulty: does not end at the switch time");

  const TimedRun& ext = w.fault_extension;
  if (ext.steps.empty()) return Check::fail("fault extension: empty");
  TimedRun head = ext;
  head.steps.pop_back();
  head.tail = 0;
  if (uses_fault(head)) return Check::fail("fault extension: fault before its last step");
  const TimedStep& last = ext.steps.back();
  if (last.edge < 0 || last.edge >= static_cast<int>(a.edges().size()) || !al.is_fault(a.edge(last.edge).label))
    return Check::fail("fault extension: does not end with a fault");
  ReplayResult fe = replay(a, ext, pre.location, pre.valuation);
  if (!fe.ok) return Check::fail(where("fault extension", fe));
  Rational horizon = ext.duration() - ext.tail;
  if (horizon != w.fault_horizon) return Check::fail("fault extension: horizon mismatch");
  if (horizon > Rational(bound)) return Check::fail("fault extension: fault after the bound");

  const TimedRun& nf = w.nonfaulty;
  if (uses_fault(nf)) return Check::fail("nonfaulty: fault or unknown edge");
  ReplayResult nr = replay(a, nf);
  if (!nr.ok) return Check::fail(where("nonfaulty", nr));
  if (w.nonfaulty_confusion_steps > nf.steps.size() || w.nonfaulty_cycle_start > nf.steps.size())
    return Check::fail("nonfaulty: step counts out of range");

  TimedRun confusing = prefix(nf, w.nonfaulty_confusion_steps, w.switch_time);
  if (confusing.tail < 0) return Check::fail("nonfaulty: confusion steps run past the switch");
  if (w.nonfaulty_confusion_steps < nf.steps.size() &&
      w.switch_time - confusing.tail + nf.steps[w.nonfaulty_confusion_steps].delay < w.switch_time)
    return Check::fail("nonfaulty: a step before the switch is left out of the confusion prefix");
  if (observations(a, confusing) != observations(a, w.prefaulty))
    return Check::fail("observations differ before the switch");

  Rational cycle_from(0);
  for (std::size_t i = 0; i < w.nonfaulty_cycle_start; ++i) cycle_from += nf.steps[i].delay;
  ReplayResult at_cycle = replay(a, prefix(nf, w.nonfaulty_cycle_start, cycle_from));
  if (!at_cycle.ok || at_cycle.location != nr.location) return Check::fail("cycle: does not return to its location");
  if (w.cycle_duration < 0 || w.cycle_duration > nf.duration() - cycle_from) return Check::fail("cycle: duration out of range");
  if (divergence && w.cycle_duration == Rational(0)) return Check::fail("cycle: takes no time");
  return {};
}

std::vector<TaWitness> mutate(const NormalizedTA& n, const TaWitness& w, long long bound) {
  std::vector<TaWitness> out;
  const TimedRun& victim = w.nonfaulty.steps.empty() ? w.prefaulty : w.nonfaulty;
  bool nonfaulty = !w.nonfaulty.steps.empty();
  if (!victim.steps.empty()) {
    TaWitness m = w;
    TimedRun& r = nonfaulty ? m.nonfaulty : m.prefaulty;
    Rational d = r.steps.front().delay;
    r.steps.erase(r.steps.begin());
    if (!r.steps.empty()) r.steps.front().delay += d;
    else r.tail += d;
    out.push_back(std::move(m));
  }
  {
    TaWitness m = w;
    m.fault_extension.steps.front().delay += Rational(bound + 1);
    m.fault_horizon += Rational(bound + 1);
    out.push_back(std::move(m));
  }
  if (!victim.steps.empty()) {
    TaWitness m = w;
    TimedRun& r = nonfaulty ? m.nonfaulty : m.prefaulty;
    const TimedAutomaton& a = n.automaton;
    EventId was = a.edge(r.steps.front().edge).label;
    for (int e = 0; e < static_cast<int>(a.edges().size()); ++e)
      if (a.edge(e).label != was) {
        r.steps.front().edge = e;
        out.push_back(std::move(m));
        break;
      }
  }
  {
    TaWitness m = w;
    m.nonfaulty.steps.resize(m.nonfaulty_cycle_start);
    m.nonfaulty.tail = 0;
    m.cycle_duration = 0;
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

bool invariant_ok(const TimedAutomaton& a, int l, const std::vector<Rational>& v) { return a.invariant(l).holds(v); }

void take(const TimedAutomaton& a, const ConcreteState& s, const TaEdge& e, std::set<ConcreteState>& into) {
  if (!e.guard.holds(s.valuation)) return;
  ConcreteState t{e.dst, s.valuation};
  for (int c : e.resets) t.valuation[static_cast<std::size_t>(c)] = 0;
  if (invariant_ok(a, t.location, t.valuation)) into.insert(std::move(t));
}

std::set<ConcreteState> silent_closure(const TimedAutomaton& a, std::set<ConcreteState> s) {
  std::vector<ConcreteState> todo(s.begin(), s.end());
  while (!todo.empty()) {
    ConcreteState q = todo.back();
    todo.pop_back();
    for (int ei : a.out_edges()[static_cast<std::size_t>(q.location)]) {
      const TaEdge& e = a.edge(ei);
      if (a.alphabet().is_fault(e.label) || a.alphabet().observable(e.label)) continue;
      std::set<ConcreteState> next;
      take(a, q, e, next);
      for (const auto& t : next)
        if (s.insert(t).second) todo.push_back(t);
    }
  }
  return s;
}

}  // namespace

std::set<ConcreteState> grid_states(const NormalizedTA& n, const TimedWord& observed, const Rational& until,
                                    const Rational& grid) {
  const TimedAutomaton& a = n.automaton;
  std::vector<std::pair<Rational, EventId>> events;
  Rational t(0);
  for (std::size_t i = 0; i < observed.events.size(); ++i) {
    t += observed.delays[i];
    if (t <= until) events.emplace_back(t, observed.events[i]);
  }
  std::set<ConcreteState> s;
  ConcreteState init{a.initial(), std::vector<Rational>(static_cast<std::size_t>(a.num_clocks()), Rational(0))};
  if (invariant_ok(a, init.location, init.valuation)) s.insert(init);
  Rational now(0);
  std::size_t next_event = 0;
  for (;;) {
    s = silent_closure(a, std::move(s));
    while (next_event < events.size() && events[next_event].first == now) {
      std::set<ConcreteState> fired;
      for (const auto& q : s)
        for (int ei : a.out_edges()[static_cast<std::size_t>(q.location)])
          if (a.edge(ei).label == events[next_event].second) take(a, q, a.edge(ei), fired);
      s = silent_closure(a, std::move(fired));
      ++next_event;
    }
    if (now >= until || s.empty()) break;
    Rational d = std::min(grid, until - now);
    if (next_event < events.size()) d = std::min(d, events[next_event].first - now);
    std::set<ConcreteState> later;
    for (const auto& q : s) {
      ConcreteState r = q;
      for (auto& x : r.valuation) x += d;
      if (invariant_ok(a, r.location, r.valuation)) later.insert(std::move(r));
    }
    s = std::move(later);
    now += d;
  }
  return s;
}

bool concretely_prefaulty(const NormalizedTA& n, const ConcreteState& s, const Rational& horizon) {
  TimeBoundQuery q = fault_query(n.automaton);
  q.start_location = s.location;
  q.start_valuation = s.valuation;
  return reachable_within(n.automaton, q, horizon);
}

FiniteAutomaton random_fa(std::mt19937_64& rng, int max_locations, int max_events) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int events = pick(1, max_events);
  std::vector<std::string> obs, unobs;
  std::string fault = "f";
  // The fault is one of the events; the others are observable or not.
  if (pick(0, 3) == 0) obs.push_back(fault);
  else unobs.push_back(fault);
  for (int i = 1; i < events; ++i) (pick(0, 2) == 0 ? unobs : obs).push_back("e" + std::to_string(i));
  EventAlphabet al(obs, unobs, fault);
  FiniteAutomaton a(al);
  const int n = pick(1, max_locations);
  for (int i = 0; i < n; ++i) a.add_location("q" + std::to_string(i));
  a.set_initial(0);
  for (int q = 0; q < n; ++q) {
    const int out = pick(1, 3);
    for (int j = 0; j < out; ++j) a.add_edge(q, pick(0, static_cast<int>(al.size()) - 1), pick(0, n - 1));
  }
  for (int q = 0; q < n; ++q) {
    a.set_final(q);
    a.set_repeated(q);
  }
  return a;
}

TimedAutomaton random_bounded_ta(std::mt19937_64& rng, int max_locations, int max_clocks, int max_constant) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  TimedAutomaton a(EventAlphabet({"a", "b"}, {"w", "f"}, "f"));
  const int clocks = pick(1, max_clocks);
  for (int c = 0; c < clocks; ++c) a.add_clock("x" + std::to_string(c));
  const int n = pick(1, max_locations);
  for (int i = 0; i < n; ++i) a.add_location("q" + std::to_string(i));
  a.set_initial(0);
  const std::vector<EventId> labels{kEpsilon, a.alphabet().label("a"), a.alphabet().label("b"), a.alphabet().label("w")};
  const Rel rels[] = {Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt};
  for (int q = 0; q < n; ++q) {
    ClockConstraint inv;
    for (int c = 0; c < clocks; ++c)
      if (c == 0 || pick(0, 1)) inv.atoms.push_back({c, pick(0, 1) ? Rel::Le : Rel::Lt, pick(1, max_constant)});
    a.set_invariant(q, inv);
    a.set_repeated(q);
    a.set_final(q);
  }
  for (int q = 0; q < n; ++q) {
    const int out = pick(1, 3);
    for (int j = 0; j < out; ++j) {
      TaEdge e;
      e.src = q;
      e.dst = pick(0, n - 1);
      e.label = labels[static_cast<std::size_t>(pick(0, 3))];
      const int atoms = pick(0, 2);
      for (int i = 0; i < atoms; ++i) e.guard.atoms.push_back({pick(0, clocks - 1), rels[pick(0, 4)], pick(0, max_constant)});
      for (int c = 0; c < clocks; ++c)
        if (pick(0, 1)) e.resets.push_back(c);
      a.add_edge(std::move(e));
    }
  }
  return a;
}

}  // namespace tapred::oracle
