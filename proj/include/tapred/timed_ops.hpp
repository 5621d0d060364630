#pragma once

#include "tapred/finite_automaton.hpp"
#include "tapred/timed_automaton.hpp"
#include "tapred/zone.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tapred {

/// delays[0] e[0] delays[1] ... e[n-1] delays[n].
struct TimedWord {
  std::vector<Rational> delays{Rational(0)};
  std::vector<EventId> events;

  Rational duration() const;
  friend bool operator==(const TimedWord&, const TimedWord&) = default;
};

struct TimedStep {
  Rational delay;
  int edge = -1;
  friend bool operator==(const TimedStep&, const TimedStep&) = default;
};

/// Explicit run: each step waits `delay` then fires `edge`; `tail` is
/// the final wait.
struct TimedRun {
  std::vector<TimedStep> steps;
  Rational tail{0};

  Rational duration() const;
  friend bool operator==(const TimedRun&, const TimedRun&) = default;
};

/// Timed word of a run: every non-silent label, with accumulated delays.
TimedWord word_of_run(const TimedAutomaton& a, const TimedRun& run);

/// (absolute time, event) pairs of the observable events of a run.
std::vector<std::pair<Rational, EventId>> observations(const TimedAutomaton& a, const TimedRun& run);

struct TaProduct {
  TimedAutomaton automaton;
  std::vector<std::pair<int, int>> states;
  std::vector<std::pair<int, int>> edge_parts;
};

/// Synchronous product on non-silent labels, silent moves interleave,
/// clocks of b follow those of a, invariants conjoined. Repeated and
/// final sets are componentwise intersections. While a sits in a location
/// flagged in `hold_b`, b makes no silent move of its own.
TaProduct ta_product(const TimedAutomaton& a, const TimedAutomaton& b, const std::vector<bool>& hold_b = {});

struct ReplayResult {
  bool ok = false;
  std::string error;
  std::size_t failed_step = 0;
  int location = -1;
  std::vector<Rational> valuation;
};

/// Checks an explicit run against guards, invariants and resets.
ReplayResult replay(const TimedAutomaton& a, const TimedRun& run, int start_location,
                    const std::vector<Rational>& start_valuation);
ReplayResult replay(const TimedAutomaton& a, const TimedRun& run);

/// Location plus zone over the automaton clocks followed by one extra
/// global-time clock that is never reset.
struct SymbolicState {
  int location = 0;
  Zone zone;
};

using TaEdgeFilter = std::function<bool(const TaEdge&)>;

/// Lets time pass up to absolute time `until`, closing under edges the
/// filter accepts; returns the states sitting exactly at `until`.
std::vector<SymbolicState> elapse_to(const TimedAutomaton& a, const std::vector<SymbolicState>& states,
                                     const Rational& until, const TaEdgeFilter& silent);

/// Fires every edge labeled `event` that `allowed` accepts.
std::vector<SymbolicState> fire(const TimedAutomaton& a, const std::vector<SymbolicState>& states, EventId event,
                                const TaEdgeFilter& allowed);

std::vector<SymbolicState> initial_states(const TimedAutomaton& a);

struct ConcreteRunOptions {
  bool allow_fault = false;
};

struct ConcreteRunResult {
  bool accepted = false;
  /// Index of the first event that could not be matched, or events.size()
  /// if the failure happened during the final delay.
  std::size_t failed_at = 0;
  std::vector<SymbolicState> final_states;
};

/// Whether a timed word over the observable events is the observation of
/// some run; silent and unobservable moves are searched symbolically.
ConcreteRunResult concrete_run(const TimedAutomaton& a, const TimedWord& w, const ConcreteRunOptions& options = {});

struct TimeBoundQuery {
  /// (location, constraint) pairs; reaching a valuation satisfying one of
  /// them at that location counts.
  std::vector<std::pair<int, ClockConstraint>> targets;
  int start_location = -1;
  std::vector<Rational> start_valuation;
  bool skip_fault_edges = true;
};

/// Targets are the fault edges' sources and guards.
TimeBoundQuery fault_query(const TimedAutomaton& a);

/// Forward zone reachability of a target within duration <= bound (or
/// unbounded when bound is empty).
bool reachable_within(const TimedAutomaton& a, const TimeBoundQuery& q, std::optional<Rational> bound);

/// Smallest integer B with a target reachable within duration B; empty if
/// no target is reachable at all.
std::optional<long long> min_time_bound(const TimedAutomaton& a, const TimeBoundQuery& q);
std::optional<long long> min_time_bound(const TimedAutomaton& a);

bool location_reachable(const TimedAutomaton& a, int location);

}  // namespace tapred
