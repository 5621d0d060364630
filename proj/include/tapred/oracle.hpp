#pragma once

#include "tapred/fa_predict.hpp"
#include "tapred/predictor.hpp"
#include "tapred/ta_predict.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace tapred::oracle {

/// Automata above this many locations are refused by the brute-force checks.
inline constexpr int kLocationCap = 10;

/// k-predictability by enumerating observable words up to the twin-plant
/// pumping length, deduplicated by the set of states they lead to.
bool fa_oracle_k_predictable(const FiniteAutomaton& a, int k);

/// Predictability with an unspecified bound: exists n, every prefaulty trace has a prefix whose
/// observation forces a fault within n steps in every fault-free
/// explanation.
bool gl_oracle(const FiniteAutomaton& a);

struct Check {
  bool ok = true;
  std::string error;

  static Check fail(std::string why) { return {false, std::move(why)}; }
};

Check validate_witness(const FiniteAutomaton& a, int k, const FaWitness& w);

/// `bound` is in time units of the normalized model (D*q when sampled).
Check validate_witness(const NormalizedTA& n, long long bound, const TaWitness& w, bool divergence = true);

/// Mutations applied to engine witnesses; each should be rejected.
std::vector<FaWitness> mutate(const FiniteAutomaton& a, const FaWitness& w);
std::vector<TaWitness> mutate(const NormalizedTA& n, const TaWitness& w, long long bound);

/// Concrete (location, valuation) states reached at `until` by fault-free
/// runs whose observation matches `observed` up to `until`, with every
/// move at a multiple of `grid`.
struct ConcreteState {
  int location;
  std::vector<Rational> valuation;
  auto operator<=>(const ConcreteState&) const = default;
};
std::set<ConcreteState> grid_states(const NormalizedTA& n, const TimedWord& observed, const Rational& until,
                                    const Rational& grid);

/// Whether a fault-enabled state is reachable within `horizon` from s.
bool concretely_prefaulty(const NormalizedTA& n, const ConcreteState& s, const Rational& horizon);

FiniteAutomaton random_fa(std::mt19937_64& rng, int max_locations = 6, int max_events = 3);
TimedAutomaton random_bounded_ta(std::mt19937_64& rng, int max_locations = 4, int max_clocks = 2,
                                 int max_constant = 4);

}  // namespace tapred::oracle
