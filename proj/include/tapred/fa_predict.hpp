#pragma once

#include "tapred/finite_automaton.hpp"

#include <optional>
#include <vector>

namespace tapred {

struct AnticipationBound {
  enum class Kind { Finite, Infinite, NotPredictable };
  Kind kind = Kind::Finite;
  long long value = 0;

  static AnticipationBound finite(long long v) { return {Kind::Finite, v}; }
  static AnticipationBound infinite() { return {Kind::Infinite, 0}; }
  static AnticipationBound not_predictable() { return {Kind::NotPredictable, 0}; }
  friend bool operator==(const AnticipationBound&, const AnticipationBound&) = default;
};

/// A run prefix that is k-prefaulty and an f-free lasso whose observation
/// extends the prefix's observation. Edge indices refer to the input model.
struct FaWitness {
  UntimedWord prefaulty;
  std::vector<int> prefaulty_edges;
  UntimedWord stem;
  std::vector<int> stem_edges;
  UntimedWord cycle;
  std::vector<int> cycle_edges;
  /// Number of leading stem edges whose projection equals the prefaulty one.
  std::size_t confusion_steps = 0;
  std::pair<int, int> confusion_pair{-1, -1};
};

struct FaVerdict {
  bool predictable = true;
  int bound = 0;
  std::optional<FaWitness> witness;
};

/// Minimum number of steps from the initial location to a fault-enabled one.
std::optional<int> kappa_fa(const FiniteAutomaton& a);

std::vector<bool> compute_Fk(const FiniteAutomaton& a, int k);

/// Locations reachable without a fault from which an infinite fault-free
/// path exists.
std::vector<bool> compute_F_not_f(const FiniteAutomaton& a);

struct TwinFa {
  FiniteAutomaton a1;
  FiniteAutomaton a2;
  /// Location of a1/a2 in the input model, per twin location.
  std::vector<int> a1_origin;
  std::vector<int> a2_origin;
  /// False when the initial location has no infinite fault-free run; a2
  /// then keeps only its initial location, non-accepting.
  bool a2_initial_live = true;
};

TwinFa build_twin_fa(const FiniteAutomaton& a, int k);

FaVerdict check_k_predictable(const FiniteAutomaton& a, int k);

AnticipationBound max_k(const FiniteAutomaton& a);

bool predictable_fa(const FiniteAutomaton& a);

}  // namespace tapred
