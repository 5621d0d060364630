#include "tapred/timed_ops.hpp"

#include "tapred/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace tapred {

Rational TimedWord::duration() const {
  Rational d(0);
  for (const auto& x : delays) d += x;
  return d;
}

Rational TimedRun::duration() const {
  Rational d = tail;
  for (const auto& s : steps) d += s.delay;
  return d;
}

TimedWord word_of_run(const TimedAutomaton& a, const TimedRun& run) {
  TimedWord w;
  for (const auto& s : run.steps) {
    w.delays.back() += s.delay;
    EventId label = a.edge(s.edge).label;
    if (label == kEpsilon) continue;
    w.events.push_back(label);
    w.delays.emplace_back(0);
  }
  w.delays.back() += run.tail;
  return w;
}

std::vector<std::pair<Rational, EventId>> observations(const TimedAutomaton& a, const TimedRun& run) {
  std::vector<std::pair<Rational, EventId>> out;
  Rational now(0);
  for (const auto& s : run.steps) {
    now += s.delay;
    EventId label = a.edge(s.edge).label;
    if (a.alphabet().observable(label)) out.emplace_back(now, label);
  }
  return out;
}

TaProduct ta_product(const TimedAutomaton& a, const TimedAutomaton& b, const std::vector<bool>& hold_b) {
  if (!(a.alphabet() == b.alphabet())) throw InputError("product of automata over different alphabets");
  TaProduct p;
  p.automaton = TimedAutomaton(a.alphabet());
  for (const auto& c : a.clock_names()) p.automaton.add_clock(c);
  for (const auto& c : b.clock_names()) {
    if (p.automaton.find_clock(c)) throw std::logic_error("clock '" + c + "' shared by both product operands");
    p.automaton.add_clock(c);
  }
  const int shift = a.num_clocks();
  auto shifted = [shift](std::vector<int> resets) {
    for (int& c : resets) c += shift;
    return resets;
  };

  std::map<std::pair<int, int>, int> ids;
  std::deque<int> queue;
  auto intern = [&](int s, int t) {
    auto [it, fresh] = ids.emplace(std::pair{s, t}, p.automaton.num_locations());
    if (fresh) {
      int id = p.automaton.add_location("(" + a.location_name(s) + "," + b.location_name(t) + ")");
      p.automaton.set_invariant(id, a.invariant(s) && b.invariant(t).shifted_clocks(shift));
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
      const TaEdge& e = a.edge(ea);
      if (e.label == kEpsilon) {
        int dst = intern(e.dst, t);
        p.automaton.add_edge({id, e.guard, kEpsilon, e.resets, dst, EdgeRole::Product, -1});
        p.edge_parts.emplace_back(ea, -1);
        continue;
      }
      for (int eb : b.out_edges()[static_cast<std::size_t>(t)]) {
        const TaEdge& f = b.edge(eb);
        if (f.label != e.label) continue;
        std::vector<int> resets = e.resets;
        for (int c : shifted(f.resets)) resets.push_back(c);
        int dst = intern(e.dst, f.dst);
        p.automaton.add_edge({id, e.guard && f.guard.shifted_clocks(shift), e.label, resets, dst, EdgeRole::Product, -1});
        p.edge_parts.emplace_back(ea, eb);
      }
    }
    if (static_cast<std::size_t>(s) < hold_b.size() && hold_b[static_cast<std::size_t>(s)]) continue;
    for (int eb : b.out_edges()[static_cast<std::size_t>(t)]) {
      const TaEdge& f = b.edge(eb);
      if (f.label != kEpsilon) continue;
      int dst = intern(s, f.dst);
      p.automaton.add_edge({id, f.guard.shifted_clocks(shift), kEpsilon, shifted(f.resets), dst, EdgeRole::Product, -1});
      p.edge_parts.emplace_back(-1, eb);
    }
  }
  return p;
}

ReplayResult replay(const TimedAutomaton& a, const TimedRun& run, int start_location,
                    const std::vector<Rational>& start_valuation) {
  ReplayResult r;
  r.location = start_location;
  r.valuation = start_valuation;
  auto fail = [&](std::size_t step, std::string why) {
    r.ok = false;
    r.failed_step = step;
    r.error = std::move(why);
    return r;
  };
  if (static_cast<int>(r.valuation.size()) != a.num_clocks()) return fail(0, "valuation has the wrong dimension");
  if (!a.invariant(r.location).holds(r.valuation)) return fail(0, "invariant violated at the start");

  auto wait = [&](const Rational& d) {
    if (d < 0) return false;
    for (auto& v : r.valuation) v += d;
    // Invariants are upper bounds, so holding at the end covers the delay.
    return a.invariant(r.location).holds(r.valuation);
  };
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const auto& step = run.steps[i];
    if (!wait(step.delay)) return fail(i, "delay violates the invariant of " + a.location_name(r.location));
    if (step.edge < 0 || step.edge >= static_cast<int>(a.edges().size())) return fail(i, "unknown edge");
    const TaEdge& e = a.edge(step.edge);
    if (e.src != r.location) return fail(i, "edge does not leave " + a.location_name(r.location));
    if (!e.guard.holds(r.valuation)) return fail(i, "guard of edge " + std::to_string(step.edge) + " is false");
    for (int c : e.resets) r.valuation[static_cast<std::size_t>(c)] = 0;
    r.location = e.dst;
    if (!a.invariant(r.location).holds(r.valuation))
      return fail(i, "invariant of " + a.location_name(r.location) + " violated on entry");
  }
  if (!wait(run.tail)) return fail(run.steps.size(), "final delay violates the invariant");
  r.ok = true;
  return r;
}

ReplayResult replay(const TimedAutomaton& a, const TimedRun& run) {
  return replay(a, run, a.initial(), std::vector<Rational>(static_cast<std::size_t>(a.num_clocks()), Rational(0)));
}

namespace {

// Inclusion-checked worklist store, per location.
class Passed {
 public:
  explicit Passed(int locations) : by_loc_(static_cast<std::size_t>(locations)) {}

  bool insert(int loc, const Zone& z) {
    auto& zones = by_loc_[static_cast<std::size_t>(loc)];
    for (const auto& old : zones)
      if (old.includes(z)) return false;
    std::erase_if(zones, [&](const Zone& old) { return z.includes(old); });
    zones.push_back(z);
    return true;
  }

  const std::vector<std::vector<Zone>>& zones() const { return by_loc_; }

 private:
  std::vector<std::vector<Zone>> by_loc_;
};

constexpr std::size_t kSymbolicLimit = 1'000'000;

}  // namespace

std::vector<SymbolicState> initial_states(const TimedAutomaton& a) {
  Zone z = Zone::zero(a.num_clocks() + 1);
  z.constrain(a.invariant(a.initial()));
  if (z.empty()) return {};
  return {{a.initial(), z}};
}

std::vector<SymbolicState> elapse_to(const TimedAutomaton& a, const std::vector<SymbolicState>& states,
                                     const Rational& until, const TaEdgeFilter& silent) {
  const int g = a.num_clocks() + 1;
  Passed passed(a.num_locations());
  std::deque<SymbolicState> work;
  auto push = [&](int loc, Zone z) {
    z.up();
    z.constrain(a.invariant(loc));
    z.constrain(g, 0, Bound::le(until));
    if (z.empty()) return;
    if (passed.insert(loc, z)) work.push_back({loc, std::move(z)});
  };
  for (const auto& s : states) push(s.location, s.zone);
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > kSymbolicLimit) throw std::runtime_error("symbolic closure did not converge");
    SymbolicState s = std::move(work.front());
    work.pop_front();
    for (int ei : a.out_edges()[static_cast<std::size_t>(s.location)]) {
      const TaEdge& e = a.edge(ei);
      if (!silent(e)) continue;
      Zone z = s.zone;
      z.constrain(e.guard);
      for (int c : e.resets) z.reset(c);
      z.constrain(a.invariant(e.dst));
      if (!z.empty()) push(e.dst, std::move(z));
    }
  }
  std::vector<SymbolicState> out;
  for (int loc = 0; loc < a.num_locations(); ++loc) {
    for (const auto& z : passed.zones()[static_cast<std::size_t>(loc)]) {
      Zone at = z;
      at.constrain(0, g, Bound::le(-until));
      if (at.empty()) continue;
      bool dup = false;
      for (const auto& o : out)
        if (o.location == loc && o.zone.includes(at)) dup = true;
      if (!dup) out.push_back({loc, std::move(at)});
    }
  }
  return out;
}

std::vector<SymbolicState> fire(const TimedAutomaton& a, const std::vector<SymbolicState>& states, EventId event,
                                const TaEdgeFilter& allowed) {
  std::vector<SymbolicState> out;
  for (const auto& s : states) {
    for (int ei : a.out_edges()[static_cast<std::size_t>(s.location)]) {
      const TaEdge& e = a.edge(ei);
      if (e.label != event || !allowed(e)) continue;
      Zone z = s.zone;
      z.constrain(e.guard);
      for (int c : e.resets) z.reset(c);
      z.constrain(a.invariant(e.dst));
      if (!z.empty()) out.push_back({e.dst, std::move(z)});
    }
  }
  return out;
}

ConcreteRunResult concrete_run(const TimedAutomaton& a, const TimedWord& w, const ConcreteRunOptions& options) {
  if (w.delays.size() != w.events.size() + 1) throw InputError("timed word must alternate delays and events");
  const auto& alphabet = a.alphabet();
  TaEdgeFilter silent = [&](const TaEdge& e) {
    if (alphabet.is_fault(e.label) && !options.allow_fault) return false;
    return !alphabet.observable(e.label);
  };
  TaEdgeFilter allowed = [&](const TaEdge& e) { return options.allow_fault || !alphabet.is_fault(e.label); };

  ConcreteRunResult r;
  auto states = initial_states(a);
  Rational now(0);
  for (std::size_t i = 0; i <= w.events.size(); ++i) {
    if (w.delays[i] < 0) throw InputError("negative delay in timed word");
    now += w.delays[i];
    states = elapse_to(a, states, now, silent);
    if (i < w.events.size() && !states.empty()) states = fire(a, states, w.events[i], allowed);
    if (i < w.events.size() && !states.empty()) states = elapse_to(a, states, now, silent);
    if (states.empty()) {
      r.failed_at = i;
      return r;
    }
  }
  r.accepted = true;
  r.failed_at = w.events.size();
  r.final_states = std::move(states);
  return r;
}

TimeBoundQuery fault_query(const TimedAutomaton& a) {
  TimeBoundQuery q;
  for (const auto& e : a.edges())
    if (a.alphabet().is_fault(e.label)) q.targets.emplace_back(e.src, e.guard);
  return q;
}

bool reachable_within(const TimedAutomaton& a, const TimeBoundQuery& q, std::optional<Rational> bound) {
  if (q.targets.empty() || a.num_locations() == 0) return false;
  const int n = a.num_clocks();
  const int t = n + 1;
  std::vector<long long> max = a.max_constants();
  for (const auto& [loc, c] : q.targets)
    for (const auto& at : c.atoms) max[static_cast<std::size_t>(at.clock)] = std::max(max[static_cast<std::size_t>(at.clock)], at.constant);
  max.push_back(bound ? floor_div(*bound).numerator() + 1 : 0);

  int start = q.start_location < 0 ? a.initial() : q.start_location;
  std::vector<Rational> v = q.start_valuation;
  if (v.empty()) v.assign(static_cast<std::size_t>(n), Rational(0));
  v.emplace_back(0);
  Zone z0 = Zone::point(v);

  Passed passed(a.num_locations());
  std::deque<SymbolicState> work;
  auto push = [&](int loc, Zone z) {
    z.constrain(a.invariant(loc));
    if (z.empty()) return false;
    z.up();
    z.constrain(a.invariant(loc));
    if (bound) z.constrain(t, 0, Bound::le(*bound));
    if (z.empty()) return false;
    for (const auto& [tl, tc] : q.targets) {
      if (tl != loc) continue;
      Zone hit = z;
      if (!hit.constrain(tc).empty()) return true;
    }
    z.extrapolate(max);
    if (passed.insert(loc, z)) work.push_back({loc, std::move(z)});
    return false;
  };
  if (push(start, z0)) return true;
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > kSymbolicLimit) throw std::runtime_error("zone exploration did not converge");
    SymbolicState s = std::move(work.front());
    work.pop_front();
    for (int ei : a.out_edges()[static_cast<std::size_t>(s.location)]) {
      const TaEdge& e = a.edge(ei);
      if (q.skip_fault_edges && a.alphabet().is_fault(e.label)) continue;
      Zone z = s.zone;
      z.constrain(e.guard);
      for (int c : e.resets) z.reset(c);
      if (!z.empty() && push(e.dst, std::move(z))) return true;
    }
  }
  return false;
}

std::optional<long long> min_time_bound(const TimedAutomaton& a, const TimeBoundQuery& q) {
  if (!reachable_within(a, q, std::nullopt)) return std::nullopt;
  // Exponential search for a feasible bound, then bisection; feasibility is
  // monotone in the bound.
  long long hi = 0;
  while (!reachable_within(a, q, Rational(hi))) hi = hi == 0 ? 1 : 2 * hi;
  long long lo = hi / 2;
  if (hi <= 1) lo = 0;
  if (reachable_within(a, q, Rational(lo))) return lo;
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (reachable_within(a, q, Rational(mid)))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::optional<long long> min_time_bound(const TimedAutomaton& a) { return min_time_bound(a, fault_query(a)); }

bool location_reachable(const TimedAutomaton& a, int location) {
  TimeBoundQuery q;
  q.targets.emplace_back(location, ClockConstraint{});
  q.skip_fault_edges = false;
  return reachable_within(a, q, std::nullopt);
}

}  // namespace tapred
