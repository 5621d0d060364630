#pragma once

#include "tapred/buchi.hpp"
#include "tapred/fa_predict.hpp"
#include "tapred/timed_automaton.hpp"
#include "tapred/timed_ops.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tapred {

inline constexpr const char* kFaultSink = "l_f";
inline constexpr const char* kFaultClock = "x_f";

struct NormalizedTA {
  TimedAutomaton automaton;
  /// -1 when the model has no fault edge.
  int fault_sink = -1;
  int fault_clock = -1;
};

/// Every fault edge is redirected to a fresh sink l_f resetting a fresh
/// clock x_f; the sink loops on observable events with x_f <= 1.
NormalizedTA normalize(const TimedAutomaton& a);

/// Sampling period alpha = q/p (lowest terms).
struct SamplingSpec {
  long long q = 1;
  long long p = 1;

  Rational rate() const { return Rational(q, p); }
  static SamplingSpec from(const Rational& alpha);
};

struct SampledModel {
  TimedAutomaton scaled;
  SamplingSpec spec;
  TimedAutomaton sampler;
};

/// Multiplies every constant by p and builds the sampler with period q.
SampledModel apply_sampling(const TimedAutomaton& a, const Rational& alpha);

struct TwinOptions {
  bool divergence = true;
  std::optional<SamplingSpec> sampling;
  /// Report "predictable" without building the twin plant when no fault
  /// is reachable at all.
  bool use_kappa_shortcut = true;
  bool parallel = true;
};

/// The prefault-detector copy. Switch, twin and END/NZ locations use
/// names containing '~' or '$', which model files cannot declare.
TimedAutomaton build_twin_A1(const NormalizedTA& n, long long delta, bool divergence,
                             const std::optional<SamplingSpec>& sampling = std::nullopt);

/// Fault-free copy with primed clocks, unobservable labels silent, every
/// location repeated.
TimedAutomaton build_A2(const NormalizedTA& n);

struct TaWitness {
  /// Runs on the normalized (and, when sampled, scaled) model.
  TimedRun prefaulty;
  Rational switch_time{0};
  TimedRun fault_extension;
  Rational fault_horizon{0};
  TimedRun nonfaulty;
  /// Steps of `nonfaulty` that happen before the switch.
  std::size_t nonfaulty_confusion_steps = 0;
  /// Steps of `nonfaulty` before the lasso cycle starts.
  std::size_t nonfaulty_cycle_start = 0;
  /// Duration of one concrete pass around the cycle.
  Rational cycle_duration{0};
  Lasso lasso;
  std::vector<std::string> stem_nodes;
  std::vector<std::string> cycle_nodes;
  TimedWord concretized_prefix;
};

struct TaVerdict {
  bool predictable = true;
  long long delta = 0;
  /// delta in time units of the original model (delta * q / p when sampled).
  Rational anticipation{0};
  std::optional<SamplingSpec> sampling;
  std::optional<long long> kappa;
  bool kappa_shortcut = false;
  int region_nodes = 0;
  int region_edges = 0;
  std::optional<TaWitness> witness;
};

/// The normalized model the decision runs on (scaled first if sampled).
NormalizedTA prepare(const TimedAutomaton& a, const TwinOptions& options);

struct TwinPlant {
  TimedAutomaton a1;
  TimedAutomaton a2;
  TaProduct product;
};

TwinPlant build_twin_plant(const NormalizedTA& n, long long delta, const TwinOptions& options);

TaVerdict check_delta_predictable(const TimedAutomaton& a, long long delta, const TwinOptions& options = {});

struct MaxDelta {
  AnticipationBound bound;
  /// bound.value in original time units.
  Rational anticipation{0};
  std::optional<long long> kappa;
  std::optional<SamplingSpec> sampling;
};

MaxDelta max_delta(const TimedAutomaton& a, const TwinOptions& options = {});

/// Hardness gadget: `l` becomes fault-enabled and also silently enters a
/// sink that loops on every non-fault event once per time unit.
TimedAutomaton reduce_reachability(const TimedAutomaton& a, int l);

}  // namespace tapred
