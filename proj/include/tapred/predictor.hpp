#pragma once

#include "tapred/ta_predict.hpp"
#include "tapred/timed_ops.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tapred {

/// Per location, zones over the model clocks plus one unconstrained extra
/// clock (so they intersect directly with estimate zones).
struct SymbolicSet {
  std::vector<std::vector<Zone>> zones;

  bool empty() const;
  bool intersects(const SymbolicState& s) const;
};

/// States from which a fault-enabled state is reachable along a fault-free
/// run lasting at most `delta` (backward fixpoint with an auxiliary clock).
SymbolicSet precompute_W(const NormalizedTA& n, const Rational& delta);

struct StateEstimate {
  std::vector<SymbolicState> states;
  Rational time{0};
};

class InconsistentObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

StateEstimate initial_estimate(const NormalizedTA& n);

/// Waits `delay` (closing under silent fault-free moves), then fires
/// `event` if given. Throws InconsistentObservation on an empty result.
StateEstimate step(const NormalizedTA& n, const StateEstimate& estimate, const Rational& delay,
                   std::optional<EventId> event);

int verdict(const StateEstimate& estimate, const SymbolicSet& w);

struct PredictionPoint {
  Rational time;
  int verdict = 0;
  friend bool operator==(const PredictionPoint&, const PredictionPoint&) = default;
};

struct PredictionTrace {
  std::vector<PredictionPoint> points;
  Rational alpha{1};
  /// Anticipation in time units (delta * alpha).
  Rational horizon{0};
  bool inconsistent = false;
  /// Index of the trace event (or events.size() for the tail) at which the
  /// observation stopped being explainable.
  std::size_t failed_at = 0;
  std::string warning;
};

/// Streaming predictor: observations every alpha time units and at each
/// observed event (one verdict when both coincide).
class Predictor {
 public:
  Predictor(NormalizedTA n, long long delta, const Rational& alpha);

  /// Consumes a delay followed by an optional event, appending the verdicts
  /// issued meanwhile to `out` (also when it throws midway).
  void observe(const Rational& delay, std::optional<EventId> event, std::vector<PredictionPoint>& out);

  const StateEstimate& estimate() const { return estimate_; }
  const SymbolicSet& w() const { return w_; }
  Rational horizon() const { return horizon_; }

 private:
  NormalizedTA n_;
  Rational alpha_;
  Rational horizon_;
  SymbolicSet w_;
  StateEstimate estimate_;
  long long next_tick_ = 1;
};

PredictionTrace run_predictor(const NormalizedTA& n, long long delta, const Rational& alpha, const TimedWord& trace);

}  // namespace tapred
