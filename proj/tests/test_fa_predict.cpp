#include "support.hpp"

#include "tapred/errors.hpp"
#include "tapred/fa_predict.hpp"
#include "tapred/oracle.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <set>

using namespace tapred;

namespace {

// Fault-free reachable and the start of an arbitrarily long fault-free path,
// by depth-first search for a path of |L| fault-free edges.
std::vector<bool> brute_F_not_f(const FiniteAutomaton& a) {
  const int n = a.num_locations();
  std::function<bool(int, int)> long_path = [&](int q, int len) {
    if (len == 0) return true;
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (!a.alphabet().is_fault(e.label) && long_path(e.dst, len - 1)) return true;
    }
    return false;
  };
  auto reach = forward_reachable(a, {a.initial()}, [&](const FaEdge& e) { return !a.alphabet().is_fault(e.label); });
  std::vector<bool> out(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q)] = reach[static_cast<std::size_t>(q)] && long_path(q, n);
  return out;
}

std::set<std::string> edge_set(const FiniteAutomaton& a) {
  std::set<std::string> out;
  for (const auto& e : a.edges())
    out.insert(a.location_name(e.src) + " " + (e.label == kEpsilon ? "eps" : a.alphabet().name(e.label)) + " " +
               a.location_name(e.dst));
  return out;
}

}  // namespace

TEST_CASE("F_k on untimed G") {
  FiniteAutomaton g = test::untimed_G();
  CHECK(test::names_of(g, compute_Fk(g, 0)) == std::vector<std::string>{"l2"});
  CHECK(test::names_of(g, compute_Fk(g, 2)) == std::vector<std::string>{"l0", "l1", "l2"});
}

TEST_CASE("F_k grows with k") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    FiniteAutomaton a = oracle::random_fa(rng);
    for (int k = 1; k <= 4; ++k) {
      auto lo = compute_Fk(a, k - 1), hi = compute_Fk(a, k);
      for (std::size_t q = 0; q < lo.size(); ++q) CHECK((!lo[q] || hi[q]));
    }
  }
}

TEST_CASE("F_not_f") {
  CHECK(test::names_of(test::untimed_G(), compute_F_not_f(test::untimed_G())) ==
        std::vector<std::string>{"l0", "l3", "l4"});
  FiniteAutomaton cyc = test::fa(3, {{0, "a", 1}, {1, "b", 2}, {2, "u", 0}});
  CHECK(test::names_of(cyc, compute_F_not_f(cyc)).size() == 3);
  // The only cycle goes through a fault edge.
  FiniteAutomaton through_f = test::fa(3, {{0, "a", 1}, {1, "f", 2}, {2, "b", 0}});
  CHECK(test::names_of(through_f, compute_F_not_f(through_f)).empty());
  // A fault-enabled location on a fault-free cycle keeps an infinite
  // fault-free future.
  FiniteAutomaton enabled_on_cycle = test::fa(3, {{0, "a", 1}, {1, "b", 0}, {1, "f", 2}});
  CHECK(test::names_of(enabled_on_cycle, compute_F_not_f(enabled_on_cycle)) == std::vector<std::string>{"q0", "q1"});
}

TEST_CASE("F_not_f matches a brute-force lasso search") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    FiniteAutomaton a = oracle::random_fa(rng, 8, 3);
    CHECK(compute_F_not_f(a) == brute_F_not_f(a));
  }
}

TEST_CASE("twin halves of untimed G") {
  FiniteAutomaton g = test::untimed_G();
  TwinFa t = build_twin_fa(g, 0);
  // Trim a1 to locations that are reachable and can reach a final one.
  std::vector<int> finals;
  for (int l = 0; l < t.a1.num_locations(); ++l)
    if (t.a1.is_final(l)) finals.push_back(l);
  auto fw = forward_reachable(t.a1, {t.a1.initial()});
  auto bw = backward_reachable(t.a1, finals);
  std::set<std::string> trimmed, trimmed_edges;
  for (int l = 0; l < t.a1.num_locations(); ++l)
    if (fw[static_cast<std::size_t>(l)] && bw[static_cast<std::size_t>(l)]) trimmed.insert(t.a1.location_name(l));
  for (const auto& e : edge_set(t.a1)) {
    auto first = e.substr(0, e.find(' '));
    auto last = e.substr(e.rfind(' ') + 1);
    if (trimmed.count(first) && trimmed.count(last)) trimmed_edges.insert(e);
  }
  CHECK(trimmed == std::set<std::string>{"l0", "l1", "l2"});
  CHECK(trimmed_edges == std::set<std::string>{"l0 a l1", "l1 c l2"});
  std::vector<std::string> a1_final;
  for (int l = 0; l < t.a1.num_locations(); ++l)
    if (t.a1.is_final(l)) a1_final.push_back(t.a1.location_name(l));
  CHECK(a1_final == std::vector<std::string>{"l2"});

  CHECK(t.a2.location_names() == std::vector<std::string>{"l0", "l3", "l4"});
  CHECK(edge_set(t.a2) == std::set<std::string>{"l0 eps l3", "l3 a l4", "l4 b l4"});
  for (int l = 0; l < t.a2.num_locations(); ++l) CHECK(t.a2.is_final(l));
  CHECK(t.a2_initial_live);
}

TEST_CASE("twin halves of degenerate automata") {
  FiniteAutomaton no_fault = test::fa(2, {{0, "a", 1}, {1, "b", 0}});
  TwinFa t = build_twin_fa(no_fault, 2);
  for (int l = 0; l < t.a1.num_locations(); ++l) CHECK_FALSE(t.a1.is_final(l));

  FiniteAutomaton all_enabled = test::fa(2, {{0, "f", 1}, {1, "f", 0}, {0, "a", 1}, {1, "a", 0}});
  // Both locations enable f but also sit on a fault-free cycle, so the
  // fault-free copy keeps them; without the a-edges nothing survives.
  FiniteAutomaton only_faults = test::fa(2, {{0, "f", 1}, {1, "f", 0}});
  TwinFa dead = build_twin_fa(only_faults, 0);
  CHECK_FALSE(dead.a2_initial_live);
  CHECK(dead.a2.edges().empty());
  for (int l = 0; l < dead.a2.num_locations(); ++l) CHECK_FALSE(dead.a2.is_final(l));
  CHECK(build_twin_fa(all_enabled, 0).a2_initial_live);
}

TEST_CASE("k-predictability of untimed G") {
  FiniteAutomaton g = test::untimed_G();
  CHECK(check_k_predictable(g, 0).predictable);
  FaVerdict v = check_k_predictable(g, 1);
  REQUIRE_FALSE(v.predictable);
  REQUIRE(v.witness);
  CHECK(g.location_name(v.witness->confusion_pair.first) == "l1");
  CHECK(g.location_name(v.witness->confusion_pair.second) == "l4");
  CHECK(v.witness->cycle.duration > 0);
  CHECK(check_k_predictable(test::fa(2, {{0, "a", 1}, {1, "b", 0}}), 3).predictable);
  CHECK_THROWS_AS(check_k_predictable(g, -1), InputError);
}

TEST_CASE("largest k") {
  FiniteAutomaton g = test::untimed_G();
  CHECK(max_k(g) == AnticipationBound::finite(0));
  FiniteAutomaton initially = test::fa(2, {{0, "f", 1}, {0, "a", 0}});
  CHECK(max_k(initially) == AnticipationBound::not_predictable());
  CHECK(max_k(test::fa(2, {{0, "a", 1}, {1, "a", 0}})) == AnticipationBound::infinite());
}

TEST_CASE("predictability") {
  CHECK(predictable_fa(test::untimed_G()));
  CHECK_FALSE(predictable_fa(test::fa(2, {{0, "f", 1}, {0, "a", 0}})));
  CHECK(predictable_fa(test::fa(1, {{0, "a", 0}})));
}

TEST_CASE("monotonicity in k and consistency of the largest k") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    FiniteAutomaton a = oracle::random_fa(rng);
    auto kappa = kappa_fa(a);
    int top = kappa ? *kappa : 4;
    std::vector<bool> verdict;
    for (int k = 0; k <= top + 1; ++k) verdict.push_back(check_k_predictable(a, k).predictable);
    for (std::size_t k = 1; k < verdict.size(); ++k) CHECK((!verdict[k] || verdict[k - 1]));
    AnticipationBound m = max_k(a);
    if (!kappa) {
      CHECK(m == AnticipationBound::infinite());
    } else if (m.kind == AnticipationBound::Kind::NotPredictable) {
      CHECK_FALSE(verdict[0]);
    } else {
      REQUIRE(m.kind == AnticipationBound::Kind::Finite);
      CHECK(m.value <= *kappa);
      CHECK(verdict[static_cast<std::size_t>(m.value)]);
      if (m.value < *kappa) CHECK_FALSE(verdict[static_cast<std::size_t>(m.value) + 1]);
    }
  }
}

TEST_CASE("every witness replays") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    FiniteAutomaton a = oracle::random_fa(rng);
    int k = i % 4;
    FaVerdict v = check_k_predictable(a, k);
    CHECK(v.predictable == !v.witness.has_value());
    if (!v.witness) continue;
    auto check = oracle::validate_witness(a, k, *v.witness);
    CHECK_MESSAGE(check.ok, check.error);
    // The witness edges spell its words.
    CHECK(word_of_path(a, v.witness->prefaulty_edges) == v.witness->prefaulty);
    CHECK(word_of_path(a, v.witness->stem_edges) == v.witness->stem);
    CHECK(word_of_path(a, v.witness->cycle_edges) == v.witness->cycle);
  }
}
