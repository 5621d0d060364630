#include "tapred/fa_predict.hpp"

#include "tapred/errors.hpp"

#include <algorithm>

namespace tapred {

namespace {

bool not_fault(const EventAlphabet& alphabet, const FaEdge& e) { return !alphabet.is_fault(e.label); }

// Copy of `a` keeping the locations in `keep` and edges between them that
// are not fault edges. Labels outside the observable alphabet become silent.
FiniteAutomaton restricted_hidden_copy(const FiniteAutomaton& a, const std::vector<bool>& keep,
                                       std::vector<int>& origin) {
  FiniteAutomaton out(a.alphabet());
  std::vector<int> id(static_cast<std::size_t>(a.num_locations()), -1);
  origin.clear();
  for (int l = 0; l < a.num_locations(); ++l) {
    if (!keep[static_cast<std::size_t>(l)]) continue;
    id[static_cast<std::size_t>(l)] = out.add_location(a.location_name(l));
    origin.push_back(l);
  }
  if (id[static_cast<std::size_t>(a.initial())] >= 0) out.set_initial(id[static_cast<std::size_t>(a.initial())]);
  for (std::size_t ei = 0; ei < a.edges().size(); ++ei) {
    const FaEdge& e = a.edges()[ei];
    if (a.alphabet().is_fault(e.label)) continue;
    int s = id[static_cast<std::size_t>(e.src)], d = id[static_cast<std::size_t>(e.dst)];
    if (s < 0 || d < 0) continue;
    EventId label = a.alphabet().observable(e.label) ? e.label : kEpsilon;
    out.add_edge(s, label, d, static_cast<int>(ei));
  }
  return out;
}

}  // namespace

std::optional<int> kappa_fa(const FiniteAutomaton& a) {
  int d = backward_distance_df(a)[static_cast<std::size_t>(a.initial())];
  if (d == kInfiniteDistance) return std::nullopt;
  return d;
}

std::vector<bool> compute_Fk(const FiniteAutomaton& a, int k) {
  auto dist = backward_distance_df(a);
  std::vector<bool> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) out[i] = dist[i] != kInfiniteDistance && dist[i] <= k;
  return out;
}

std::vector<bool> compute_F_not_f(const FiniteAutomaton& a) {
  const auto& alphabet = a.alphabet();
  auto keep = [&](const FaEdge& e) { return not_fault(alphabet, e); };
  std::vector<bool> in = forward_reachable(a, {a.initial()}, keep);

  // Greatest fixpoint: drop locations without a fault-free successor inside.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = 0; l < a.num_locations(); ++l) {
      if (!in[static_cast<std::size_t>(l)]) continue;
      bool has_succ = false;
      for (int ei : a.out_edges()[static_cast<std::size_t>(l)]) {
        const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
        if (keep(e) && in[static_cast<std::size_t>(e.dst)]) {
          has_succ = true;
          break;
        }
      }
      if (!has_succ) {
        in[static_cast<std::size_t>(l)] = false;
        changed = true;
      }
    }
  }
  return in;
}

TwinFa build_twin_fa(const FiniteAutomaton& a, int k) {
  if (k < 0) throw InputError("anticipation bound must be non-negative");
  TwinFa twin;
  std::vector<bool> all(static_cast<std::size_t>(a.num_locations()), true);
  twin.a1 = restricted_hidden_copy(a, all, twin.a1_origin);
  auto fk = compute_Fk(a, k);
  for (int l = 0; l < twin.a1.num_locations(); ++l) {
    twin.a1.set_final(l, fk[static_cast<std::size_t>(l)]);
    twin.a1.set_repeated(l, true);
  }

  auto fnf = compute_F_not_f(a);
  twin.a2_initial_live = fnf[static_cast<std::size_t>(a.initial())];
  auto keep = fnf;
  keep[static_cast<std::size_t>(a.initial())] = true;
  twin.a2 = restricted_hidden_copy(a, keep, twin.a2_origin);
  for (int l = 0; l < twin.a2.num_locations(); ++l) {
    bool live = fnf[static_cast<std::size_t>(twin.a2_origin[static_cast<std::size_t>(l)])];
    twin.a2.set_final(l, live);
    twin.a2.set_repeated(l, live);
  }
  if (!twin.a2_initial_live) {
    // Without an infinite fault-free run the initial location leads nowhere.
    FiniteAutomaton lone(a.alphabet());
    lone.add_location(a.location_name(a.initial()));
    twin.a2 = std::move(lone);
    twin.a2_origin = {a.initial()};
  }
  return twin;
}

FaVerdict check_k_predictable(const FiniteAutomaton& a, int k) {
  if (k < 0) throw InputError("anticipation bound must be non-negative");
  FaVerdict verdict;
  verdict.bound = k;
  if (!kappa_fa(a)) return verdict;

  TwinFa twin = build_twin_fa(a, k);
  FaProduct prod = fa_product(twin.a1, twin.a2);
  auto path = shortest_path(prod.automaton, prod.automaton.initial(),
                            [&](int q) { return prod.automaton.is_final(q); });
  if (!path) return verdict;

  verdict.predictable = false;
  FaWitness w;
  for (int pe : *path) {
    auto [e1, e2] = prod.edge_parts[static_cast<std::size_t>(pe)];
    if (e1 >= 0) w.prefaulty_edges.push_back(twin.a1.edges()[static_cast<std::size_t>(e1)].origin);
    if (e2 >= 0) w.stem_edges.push_back(twin.a2.edges()[static_cast<std::size_t>(e2)].origin);
  }
  int end = path->empty() ? prod.automaton.initial()
                          : prod.automaton.edges()[static_cast<std::size_t>(path->back())].dst;
  auto [s1, s2] = prod.states[static_cast<std::size_t>(end)];
  int loc1 = twin.a1_origin[static_cast<std::size_t>(s1)];
  int loc2 = twin.a2_origin[static_cast<std::size_t>(s2)];
  w.confusion_pair = {loc1, loc2};
  w.confusion_steps = w.stem_edges.size();

  // Extend the stem inside a2 to a location on a cycle, then close the cycle.
  const FiniteAutomaton& a2 = twin.a2;
  auto on_cycle = [&](int q) {
    for (int ei : a2.out_edges()[static_cast<std::size_t>(q)]) {
      int d = a2.edges()[static_cast<std::size_t>(ei)].dst;
      if (shortest_path(a2, d, [q](int x) { return x == q; })) return true;
    }
    return false;
  };
  auto to_cycle = shortest_path(a2, s2, on_cycle);
  if (!to_cycle) throw std::logic_error("accepting a2 location without an infinite path");
  int anchor = to_cycle->empty() ? s2 : a2.edges()[static_cast<std::size_t>(to_cycle->back())].dst;
  for (int ei : *to_cycle) w.stem_edges.push_back(a2.edges()[static_cast<std::size_t>(ei)].origin);

  std::optional<std::vector<int>> best;
  for (int ei : a2.out_edges()[static_cast<std::size_t>(anchor)]) {
    int d = a2.edges()[static_cast<std::size_t>(ei)].dst;
    auto back = shortest_path(a2, d, [anchor](int x) { return x == anchor; });
    if (!back) continue;
    back->insert(back->begin(), ei);
    if (!best || back->size() < best->size()) best = std::move(back);
  }
  for (int ei : *best) w.cycle_edges.push_back(a2.edges()[static_cast<std::size_t>(ei)].origin);

  w.prefaulty = word_of_path(a, w.prefaulty_edges);
  w.stem = word_of_path(a, w.stem_edges);
  w.cycle = word_of_path(a, w.cycle_edges);
  verdict.witness = std::move(w);
  return verdict;
}

AnticipationBound max_k(const FiniteAutomaton& a) {
  auto kappa = kappa_fa(a);
  if (!kappa) return AnticipationBound::infinite();
  TwinFa twin = build_twin_fa(a, 0);
  FaProduct prod = fa_product(twin.a1, twin.a2);
  auto dist = backward_distance_df(a);
  int m = kInfiniteDistance;
  for (int q = 0; q < prod.automaton.num_locations(); ++q) {
    auto [s1, s2] = prod.states[static_cast<std::size_t>(q)];
    if (!twin.a2.is_final(s2)) continue;
    int loc1 = twin.a1_origin[static_cast<std::size_t>(s1)];
    m = std::min(m, dist[static_cast<std::size_t>(loc1)]);
  }
  if (m == kInfiniteDistance) return AnticipationBound::finite(*kappa);
  if (m == 0) return AnticipationBound::not_predictable();
  return AnticipationBound::finite(std::min(m - 1, *kappa));
}

bool predictable_fa(const FiniteAutomaton& a) { return check_k_predictable(a, 0).predictable; }

}  // namespace tapred
