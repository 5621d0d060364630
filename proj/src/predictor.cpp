#include "tapred/predictor.hpp"

#include "tapred/errors.hpp"

#include <deque>

namespace tapred {

bool SymbolicSet::empty() const {
  for (const auto& zs : zones)
    if (!zs.empty()) return false;
  return true;
}

bool SymbolicSet::intersects(const SymbolicState& s) const {
  if (s.location < 0 || static_cast<std::size_t>(s.location) >= zones.size()) return false;
  for (const auto& z : zones[static_cast<std::size_t>(s.location)])
    if (z.intersects(s.zone)) return true;
  return false;
}

SymbolicSet precompute_W(const NormalizedTA& n, const Rational& delta) {
  const TimedAutomaton& a = n.automaton;
  const auto& alphabet = a.alphabet();
  const int aux = a.num_clocks();  // 0-based index of the elapsed-time clock
  std::vector<std::vector<Zone>> passed(static_cast<std::size_t>(a.num_locations()));
  std::deque<SymbolicState> work;

  auto insert = [&](int loc, Zone z) {
    z.down();
    z.constrain(a.invariant(loc));
    if (z.empty()) return;
    auto& zs = passed[static_cast<std::size_t>(loc)];
    for (const auto& old : zs)
      if (old.includes(z)) return;
    std::erase_if(zs, [&](const Zone& old) { return z.includes(old); });
    zs.push_back(z);
    work.push_back({loc, std::move(z)});
  };

  for (const auto& e : a.edges()) {
    if (!alphabet.is_fault(e.label) || e.src == n.fault_sink) continue;
    Zone z = Zone::universe(aux + 1);
    z.constrain(e.guard);
    z.constrain(a.invariant(e.src));
    z.constrain(aux + 1, 0, Bound::le(delta));
    insert(e.src, std::move(z));
  }

  std::vector<std::vector<int>> in(static_cast<std::size_t>(a.num_locations()));
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    const TaEdge& e = a.edges()[i];
    if (alphabet.is_fault(e.label) || e.src == n.fault_sink || e.dst == n.fault_sink) continue;
    in[static_cast<std::size_t>(e.dst)].push_back(static_cast<int>(i));
  }
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > 1'000'000) throw std::runtime_error("backward fixpoint did not converge");
    SymbolicState s = std::move(work.front());
    work.pop_front();
    for (int ei : in[static_cast<std::size_t>(s.location)]) {
      const TaEdge& e = a.edge(ei);
      Zone z = s.zone;
      for (int c : e.resets) z.constrain(c + 1, 0, Bound::le(Rational(0)));
      if (z.empty()) continue;
      for (int c : e.resets) z.free(c);
      z.constrain(e.guard);
      z.constrain(a.invariant(e.src));
      if (!z.empty()) insert(e.src, std::move(z));
    }
  }

  SymbolicSet w;
  w.zones.resize(passed.size());
  for (std::size_t l = 0; l < passed.size(); ++l) {
    for (Zone z : passed[l]) {
      z.constrain(aux + 1, 0, Bound::le(Rational(0)));
      if (z.empty()) continue;
      z.free(aux);
      w.zones[l].push_back(std::move(z));
    }
  }
  return w;
}

StateEstimate initial_estimate(const NormalizedTA& n) {
  StateEstimate e;
  e.states = initial_states(n.automaton);
  if (e.states.empty()) throw InconsistentObservation("initial invariant is unsatisfiable");
  const auto& alphabet = n.automaton.alphabet();
  e.states = elapse_to(n.automaton, e.states, Rational(0), [&](const TaEdge& edge) {
    return !alphabet.observable(edge.label) && !alphabet.is_fault(edge.label);
  });
  return e;
}

StateEstimate step(const NormalizedTA& n, const StateEstimate& estimate, const Rational& delay,
                   std::optional<EventId> event) {
  if (delay < 0) throw InputError("negative delay");
  const TimedAutomaton& a = n.automaton;
  const auto& alphabet = a.alphabet();
  if (event && !alphabet.observable(*event)) throw InputError("observed event '" + alphabet.name(*event) + "' is not observable");
  TaEdgeFilter silent = [&](const TaEdge& e) { return !alphabet.observable(e.label) && !alphabet.is_fault(e.label); };
  StateEstimate next;
  next.time = estimate.time + delay;
  next.states = elapse_to(a, estimate.states, next.time, silent);
  if (event && !next.states.empty()) {
    next.states = fire(a, next.states, *event, [&](const TaEdge& e) { return !alphabet.is_fault(e.label); });
    if (!next.states.empty()) next.states = elapse_to(a, next.states, next.time, silent);
  }
  if (next.states.empty()) throw InconsistentObservation("observation inconsistent with the model at time " + to_string(next.time));
  return next;
}

int verdict(const StateEstimate& estimate, const SymbolicSet& w) {
  for (const auto& s : estimate.states)
    if (w.intersects(s)) return 1;
  return 0;
}

Predictor::Predictor(NormalizedTA n, long long delta, const Rational& alpha)
    : n_(std::move(n)), alpha_(alpha), horizon_(Rational(delta) * alpha) {
  if (alpha <= 0) throw InputError("sampling rate must be positive");
  if (delta < 0) throw InputError("anticipation bound must be non-negative");
  w_ = precompute_W(n_, horizon_);
  estimate_ = initial_estimate(n_);
}

void Predictor::observe(const Rational& delay, std::optional<EventId> event, std::vector<PredictionPoint>& out) {
  if (delay < 0) throw InputError("negative delay");
  const Rational target = estimate_.time + delay;
  for (Rational tick = alpha_ * next_tick_; tick <= target; tick = alpha_ * next_tick_) {
    if (tick == target && event) break;
    estimate_ = step(n_, estimate_, tick - estimate_.time, std::nullopt);
    out.push_back({tick, verdict(estimate_, w_)});
    ++next_tick_;
  }
  if (event) {
    estimate_ = step(n_, estimate_, target - estimate_.time, event);
    out.push_back({target, verdict(estimate_, w_)});
    if (alpha_ * next_tick_ == target) ++next_tick_;
  } else if (estimate_.time < target) {
    estimate_ = step(n_, estimate_, target - estimate_.time, std::nullopt);
  }
}

PredictionTrace run_predictor(const NormalizedTA& n, long long delta, const Rational& alpha, const TimedWord& trace) {
  if (trace.delays.size() != trace.events.size() + 1) throw InputError("timed word must alternate delays and events");
  PredictionTrace out;
  out.alpha = alpha;
  Predictor p(n, delta, alpha);
  out.horizon = p.horizon();
  for (std::size_t i = 0; i < trace.delays.size(); ++i) {
    std::optional<EventId> event;
    if (i < trace.events.size()) event = trace.events[i];
    try {
      p.observe(trace.delays[i], event, out.points);
    } catch (const InconsistentObservation& e) {
      out.inconsistent = true;
      out.failed_at = i;
      out.warning = e.what();
      break;
    }
  }
  return out;
}

}  // namespace tapred
