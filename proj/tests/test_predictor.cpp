#include "support.hpp"

#include "tapred/errors.hpp"
#include "tapred/oracle.hpp"
#include "tapred/predictor.hpp"
#include "tapred/ta_predict.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace tapred;

namespace {

SymbolicState at(const NormalizedTA& n, const std::string& loc, std::vector<Rational> valuation) {
  return {n.automaton.location(loc), Zone::point(valuation)};
}

TimedWord delay_only(const Rational& d) {
  TimedWord w;
  w.delays = {d};
  return w;
}

bool estimate_has(const StateEstimate& e, int loc, const std::vector<Rational>& v) {
  for (const auto& s : e.states)
    if (s.location == loc && s.zone.contains(v)) return true;
  return false;
}

struct FaultyRun {
  TimedWord observed;
  std::optional<Rational> fault_time;
};

// Random concrete run on a quarter grid that stops when the fault fires.
FaultyRun simulate(const NormalizedTA& n, std::mt19937_64& rng, int max_steps) {
  const TimedAutomaton& a = n.automaton;
  FaultyRun out;
  int l = a.initial();
  std::vector<Rational> v(static_cast<std::size_t>(a.num_clocks()));
  Rational now(0), last(0);
  for (int step = 0; step < max_steps; ++step) {
    std::vector<Rational> delays;
    for (int q = 0; q <= 8; ++q) {
      auto w = v;
      for (auto& x : w) x += Rational(q, 4);
      if (a.invariant(l).holds(w)) delays.push_back(Rational(q, 4));
    }
    if (delays.empty()) break;
    Rational d = delays[rng() % delays.size()];
    for (auto& x : v) x += d;
    now += d;
    std::vector<int> enabled;
    for (int ei : a.out_edges()[static_cast<std::size_t>(l)]) {
      auto w = v;
      for (int c : a.edge(ei).resets) w[static_cast<std::size_t>(c)] = 0;
      if (a.edge(ei).guard.holds(v) && a.invariant(a.edge(ei).dst).holds(w)) enabled.push_back(ei);
    }
    if (enabled.empty()) continue;
    const TaEdge& e = a.edge(enabled[rng() % enabled.size()]);
    if (a.alphabet().is_fault(e.label)) {
      out.fault_time = now;
      break;
    }
    if (a.alphabet().observable(e.label)) {
      out.observed.delays.back() = now - last;
      out.observed.events.push_back(e.label);
      out.observed.delays.push_back(0);
      last = now;
    }
    for (int c : e.resets) v[static_cast<std::size_t>(c)] = 0;
    l = e.dst;
  }
  out.observed.delays.back() = now - last;
  return out;
}

long long lcm_of_denominators(const TimedWord& w, const Rational& alpha) {
  long long m = alpha.denominator();
  for (const auto& d : w.delays) m = std::lcm(m, d.denominator());
  return m;
}

}  // namespace

TEST_CASE("W for B") {
  NormalizedTA n = normalize(test::model_B());
  auto w4 = precompute_W(n, Rational(4));
  CHECK(w4.intersects(at(n, "l0", {Rational(2), Rational(2), Rational(0)})));
  CHECK(w4.intersects(at(n, "l0", {Rational(7), Rational(7), Rational(0)})));
  CHECK_FALSE(w4.intersects(at(n, "l0", {Rational(19, 10), Rational(19, 10), Rational(0)})));
  CHECK_FALSE(w4.intersects(at(n, "l1", {Rational(0), Rational(3), Rational(0)})));
  CHECK_FALSE(w4.intersects(at(n, "l_f", {Rational(0), Rational(0), Rational(0)})));

  auto w0 = precompute_W(n, Rational(0));
  CHECK(w0.intersects(at(n, "l0", {Rational(6), Rational(6), Rational(0)})));
  CHECK(w0.intersects(at(n, "l0", {Rational(8), Rational(8), Rational(0)})));
  CHECK_FALSE(w0.intersects(at(n, "l0", {Rational(59, 10), Rational(59, 10), Rational(0)})));

  auto plain = test::parse(R"({"type": "ta", "locations": ["l0"], "initial": "l0", "clocks": ["x"],
    "events": {"observable": ["a"], "unobservable": ["f"], "fault": "f"},
    "invariants": {"l0": "x<=1"},
    "edges": [{"src": "l0", "event": "a", "dst": "l0", "guard": "x==1", "resets": ["x"]}]})").ta();
  CHECK(precompute_W(normalize(plain), Rational(5)).empty());
}

TEST_CASE("W agrees with concrete reachability on a grid") {
  for (const auto& model : {test::model_B(), test::timed_G()}) {
    NormalizedTA n = normalize(model);
    const int clocks = n.automaton.num_clocks();
    for (int delta = 0; delta <= 4; ++delta) {
      auto w = precompute_W(n, Rational(delta));
      for (int l = 0; l < n.automaton.num_locations(); ++l)
        for (int q = 0; q <= 36; ++q) {
          // All clocks equal: the diagonal is what runs from the start reach
          // before any reset.
          std::vector<Rational> v(static_cast<std::size_t>(clocks), Rational(q, 4));
          if (!n.automaton.invariant(l).holds(v)) continue;
          v.push_back(Rational(0));
          bool symbolic = w.intersects({l, Zone::point(v)});
          v.pop_back();
          CHECK(symbolic == oracle::concretely_prefaulty(n, {l, v}, Rational(delta)));
        }
    }
  }
}

TEST_CASE("estimate updates on B") {
  NormalizedTA n = normalize(test::model_B());
  const int l0 = n.automaton.location("l0"), l1 = n.automaton.location("l1");
  const EventId a = n.automaton.alphabet().label("a");
  auto e0 = initial_estimate(n);

  auto e = step(n, e0, Rational(12, 5), std::nullopt);
  CHECK(e.time == Rational(12, 5));
  for (const auto& s : e.states) CHECK(s.location == l0);
  CHECK(estimate_has(e, l0, {Rational(12, 5), Rational(12, 5), Rational(12, 5)}));
  auto w4 = precompute_W(n, Rational(4));
  CHECK(verdict(e, w4) == 1);

  auto same = step(n, e0, Rational(0), std::nullopt);
  CHECK(same.states.size() == e0.states.size());

  auto fired = step(n, e0, Rational(1), a);
  CHECK(estimate_has(fired, l1, {Rational(0), Rational(1), Rational(1)}));
  for (const auto& s : fired.states) CHECK(s.location == l1);
  CHECK(verdict(fired, w4) == 0);

  CHECK_THROWS_AS(step(n, e0, Rational(1, 2), a), InconsistentObservation);
  CHECK_THROWS_AS(step(n, e0, Rational(-1), std::nullopt), InputError);
  CHECK_THROWS_AS(step(n, e0, Rational(1), n.automaton.alphabet().label("f")), InputError);
  CHECK(verdict(e, SymbolicSet{}) == 0);
}

TEST_CASE("predictor on B") {
  NormalizedTA n = normalize(test::model_B());
  auto t = run_predictor(n, 4, Rational(1), delay_only(Rational(3)));
  CHECK(t.points == std::vector<PredictionPoint>{{Rational(1), 0}, {Rational(2), 1}, {Rational(3), 1}});
  CHECK(t.horizon == Rational(4));

  auto s = run_predictor(n, 6, Rational(3, 5), delay_only(Rational(3)));
  std::vector<PredictionPoint> expected{{Rational(3, 5), 0}, {Rational(6, 5), 0}, {Rational(9, 5), 0},
                                        {Rational(12, 5), 1}, {Rational(3), 1}};
  CHECK(s.points == expected);
  CHECK(s.horizon == Rational(18, 5));

  // An event on a tick yields one verdict.
  TimedWord w;
  w.delays = {Rational(1), Rational(1)};
  w.events = {n.automaton.alphabet().label("a")};
  auto e = run_predictor(n, 4, Rational(1), w);
  CHECK(e.points == std::vector<PredictionPoint>{{Rational(1), 0}, {Rational(2), 0}});
  CHECK_FALSE(e.inconsistent);

  // An event between ticks gets its own verdict.
  w.delays = {Rational(1), Rational(1, 2)};
  auto f = run_predictor(n, 4, Rational(3, 4), w);
  CHECK(f.points == std::vector<PredictionPoint>{{Rational(3, 4), 0}, {Rational(1), 0}, {Rational(3, 2), 0}});

  w.delays = {Rational(1, 2), Rational(1)};
  auto bad = run_predictor(n, 4, Rational(1), w);
  CHECK(bad.inconsistent);
  CHECK(bad.failed_at == 0);
  CHECK_FALSE(bad.warning.empty());

  CHECK_THROWS_AS(run_predictor(n, 4, Rational(0), delay_only(Rational(1))), InputError);
}

TEST_CASE("verdicts agree with grid explanations") {
  struct Case {
    TimedAutomaton model;
    long long delta;
    Rational alpha;
  };
  std::vector<Case> cases{{test::model_B(), 4, Rational(1)},
                          {test::model_B(), 6, Rational(3, 5)},
                          {test::timed_G(), 3, Rational(1)},
                          {test::timed_G(), 2, Rational(1, 2)}};
  std::mt19937_64 rng(17);
  int compared = 0, alarms = 0;
  for (const auto& c : cases) {
    NormalizedTA n = normalize(c.model);
    for (int round = 0; round < 12; ++round) {
      FaultyRun run = simulate(n, rng, 8);
      TimedWord trace = run.observed;
      auto out = run_predictor(n, c.delta, c.alpha, trace);
      REQUIRE_FALSE(out.inconsistent);
      Rational grid(1, 2 * lcm_of_denominators(trace, c.alpha));
      for (const auto& p : out.points) {
        bool explained = false;
        for (const auto& s : oracle::grid_states(n, trace, p.time, grid))
          if (oracle::concretely_prefaulty(n, s, Rational(c.delta) * c.alpha)) explained = true;
        CHECK_MESSAGE(p.verdict == (explained ? 1 : 0), "time " << to_string(p.time));
        ++compared;
        alarms += p.verdict;
      }
    }
  }
  CHECK(compared > 100);
  CHECK(alarms > 10);
}

TEST_CASE("closed-loop simulation raises the alarm in time") {
  struct Case {
    TimedAutomaton model;
    long long delta;
  };
  std::mt19937_64 rng(23);
  for (const auto& c : {Case{test::model_B(), 4}, Case{test::timed_G(), 3}}) {
    NormalizedTA n = normalize(c.model);
    int faults = 0;
    for (int round = 0; round < 300 && faults < 30; ++round) {
      FaultyRun run = simulate(n, rng, 40);
      if (!run.fault_time) continue;
      ++faults;
      auto out = run_predictor(n, c.delta, Rational(1), run.observed);
      REQUIRE_FALSE(out.inconsistent);
      bool warned = false;
      for (const auto& p : out.points)
        if (p.verdict == 1 && p.time <= *run.fault_time - Rational(c.delta)) warned = true;
      CHECK_MESSAGE(warned, "fault at " << to_string(*run.fault_time));
    }
    CHECK(faults > 5);
  }
}

TEST_CASE("verdicts depend only on the past") {
  NormalizedTA n = normalize(test::model_B());
  const EventId a = n.automaton.alphabet().label("a");
  auto quiet = run_predictor(n, 4, Rational(1, 2), delay_only(Rational(5)));
  for (int k = 2; k <= 8; ++k) {
    // l1 forces an a every time unit.
    TimedWord w;
    w.delays.assign(static_cast<std::size_t>(k) + 1, Rational(1));
    w.events.assign(static_cast<std::size_t>(k), a);
    auto loud = run_predictor(n, 4, Rational(1, 2), w);
    REQUIRE_FALSE(loud.inconsistent);
    // Before the first event both traces share their past.
    for (std::size_t i = 0; i < loud.points.size() && loud.points[i].time < Rational(1); ++i)
      CHECK(loud.points[i] == quiet.points[i]);
    // After a the run sits in l1, which never reaches the fault.
    for (const auto& p : loud.points)
      if (p.time >= Rational(1)) CHECK(p.verdict == 0);
  }
  // Observing a right away rules the fault out; silence keeps it possible.
  auto e0 = initial_estimate(n);
  auto w4 = precompute_W(n, Rational(4));
  CHECK(verdict(step(n, e0, Rational(2), std::nullopt), w4) == 1);
  CHECK(verdict(step(n, step(n, e0, Rational(1), a), Rational(1), a), w4) == 0);
}
