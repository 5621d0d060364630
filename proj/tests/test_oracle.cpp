#include "support.hpp"

#include "tapred/fa_predict.hpp"
#include "tapred/oracle.hpp"
#include "tapred/ta_predict.hpp"

#include <doctest.h>

#include <random>

using namespace tapred;

TEST_CASE("fa oracle examples") {
  auto g = test::untimed_G();
  CHECK(oracle::fa_oracle_k_predictable(g, 0));
  CHECK_FALSE(oracle::fa_oracle_k_predictable(g, 1));
  CHECK(oracle::gl_oracle(g));

  // Fault enabled at the start, nothing else: every bound is fine.
  auto only = test::fa(1, {{0, "f", 0}});
  for (int k = 0; k <= 3; ++k) CHECK(oracle::fa_oracle_k_predictable(only, k));
  CHECK(oracle::gl_oracle(only));

  // An observable a loop hides whether the fault branch was taken.
  auto hidden = test::fa(3, {{0, "u", 1}, {0, "a", 0}, {1, "a", 1}, {1, "f", 2}});
  CHECK_FALSE(oracle::fa_oracle_k_predictable(hidden, 0));
  CHECK_FALSE(oracle::gl_oracle(hidden));

  // The fault branch is announced by b.
  auto announced = test::fa(4, {{0, "b", 1}, {1, "f", 2}, {0, "a", 3}, {3, "a", 3}});
  CHECK(oracle::fa_oracle_k_predictable(announced, 0));
  // One step ahead the start itself is prefaulty and looks like the a branch.
  CHECK_FALSE(oracle::fa_oracle_k_predictable(announced, 1));
  CHECK(oracle::gl_oracle(announced));

  auto big = test::fa(oracle::kLocationCap + 1, {});
  CHECK_THROWS(oracle::fa_oracle_k_predictable(big, 0));
}

TEST_CASE("oracles agree with the engine on random automata") {
  std::mt19937_64 rng(2024);
  int disagreements = 0, not_predictable = 0;
  for (int i = 0; i < 200; ++i) {
    auto a = oracle::random_fa(rng, 6, 3);
    for (int k = 0; k <= 3; ++k) {
      bool engine = check_k_predictable(a, k).predictable;
      bool brute = oracle::fa_oracle_k_predictable(a, k);
      disagreements += engine != brute;
      not_predictable += !engine;
    }
    bool gl = oracle::gl_oracle(a);
    CHECK(predictable_fa(a) == gl);
    CHECK(check_k_predictable(a, 0).predictable == gl);
  }
  CHECK(disagreements == 0);
  CHECK(not_predictable > 50);
}

TEST_CASE("fa witnesses validate and mutants do not") {
  std::mt19937_64 rng(77);
  std::vector<std::pair<FiniteAutomaton, int>> cases{{test::untimed_G(), 1}};
  for (int i = 0; i < 100; ++i) cases.emplace_back(oracle::random_fa(rng), static_cast<int>(rng() % 4));
  int witnesses = 0;
  for (const auto& [a, k] : cases) {
    auto v = check_k_predictable(a, k);
    if (v.predictable) continue;
    REQUIRE(v.witness);
    ++witnesses;
    auto ok = oracle::validate_witness(a, k, *v.witness);
    CHECK_MESSAGE(ok.ok, ok.error);
    for (const auto& m : oracle::mutate(a, *v.witness)) CHECK_FALSE(oracle::validate_witness(a, k, m).ok);
  }
  CHECK(witnesses > 20);
}

TEST_CASE("ta witnesses validate and mutants do not") {
  struct Case {
    TimedAutomaton model;
    long long delta;
    TwinOptions options;
  };
  std::vector<Case> cases{{test::timed_G(), 4, {}},
                          {test::model_B(), 5, {}},
                          {test::model_B(), 7, {.sampling = SamplingSpec::from(Rational(3, 5))}}};
  for (const auto& c : cases) {
    auto v = check_delta_predictable(c.model, c.delta, c.options);
    REQUIRE(v.witness);
    NormalizedTA n = prepare(c.model, c.options);
    long long bound = c.options.sampling ? c.delta * c.options.sampling->q : c.delta;
    auto ok = oracle::validate_witness(n, bound, *v.witness);
    CHECK_MESSAGE(ok.ok, ok.error);
    auto mutants = oracle::mutate(n, *v.witness, bound);
    CHECK(mutants.size() >= 3);
    for (const auto& m : mutants) CHECK_FALSE(oracle::validate_witness(n, bound, m).ok);
    // A witness for one bound says nothing about a smaller one.
    if (v.witness->fault_horizon > Rational(bound - 1))
      CHECK_FALSE(oracle::validate_witness(n, bound - 1, *v.witness).ok);
  }
}

TEST_CASE("grid states on B") {
  NormalizedTA n = normalize(test::model_B());
  TimedWord quiet;
  quiet.delays = {Rational(3)};
  auto s = oracle::grid_states(n, quiet, Rational(12, 5), Rational(1, 5));
  REQUIRE(s.size() == 1);
  CHECK(s.begin()->location == n.automaton.location("l0"));
  CHECK(s.begin()->valuation[0] == Rational(12, 5));
  CHECK(oracle::concretely_prefaulty(n, *s.begin(), Rational(18, 5)));
  CHECK_FALSE(oracle::concretely_prefaulty(n, *s.begin(), Rational(3)));

  auto early = oracle::grid_states(n, quiet, Rational(1, 2), Rational(1, 4));
  CHECK(early.size() == 4);  // l0, or l1 entered at 0, 1/4 or 1/2
}

TEST_CASE("random models are well formed") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    auto a = oracle::random_fa(rng, 6, 3);
    CHECK(a.num_locations() >= 1);
    CHECK(a.num_locations() <= 6);
    CHECK(a.alphabet().size() <= 3);
    auto t = oracle::random_bounded_ta(rng);
    CHECK(t.num_locations() <= 4);
    CHECK(t.num_clocks() <= 2);
    CHECK(unbounded_locations(t).empty());
    for (long long m : t.max_constants()) CHECK(m <= 4);
  }
}
