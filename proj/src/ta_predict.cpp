#include "tapred/ta_predict.hpp"

#include "tapred/errors.hpp"
#include "tapred/region_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace tapred {

namespace {


bool already_normalized(const TimedAutomaton& a, int sink, int clock) {
  const auto& alphabet = a.alphabet();
  ClockConstraint expected{{{clock, Rel::Le, 1}}};
  if (!(a.invariant(sink) == expected)) return false;
  for (int l = 0; l < a.num_locations(); ++l)
    if (l != sink && a.invariant(l).mentions(clock)) return false;
  std::vector<bool> looped(alphabet.size(), false);
  for (const auto& e : a.edges()) {
    bool fault = alphabet.is_fault(e.label);
    if (fault && (e.dst != sink || !e.resets_clock(clock))) return false;
    if (e.guard.mentions(clock)) return false;
    if (e.src == sink) {
      if (fault || e.dst != sink || !alphabet.observable(e.label) || !e.guard.is_true()) return false;
      if (e.resets != std::vector<int>{clock}) return false;
      looped[static_cast<std::size_t>(e.label)] = true;
      continue;
    }
    if (!fault && (e.resets_clock(clock) || e.dst == sink)) return false;
  }
  for (EventId o : alphabet.observable_events())
    if (!looped[static_cast<std::size_t>(o)]) return false;
  return true;
}

std::vector<int> remap_resets(const std::vector<int>& resets, const std::vector<int>& clock_map) {
  std::vector<int> out;
  for (int c : resets)
    if (clock_map[static_cast<std::size_t>(c)] >= 0) out.push_back(clock_map[static_cast<std::size_t>(c)]);
  return out;
}

ClockConstraint remap(const ClockConstraint& g, const std::vector<int>& clock_map) {
  ClockConstraint out;
  for (auto a : g.atoms) {
    int c = clock_map[static_cast<std::size_t>(a.clock)];
    if (c < 0) throw std::logic_error("constraint on a dropped clock");
    a.clock = c;
    out.atoms.push_back(a);
  }
  return out;
}

}  // namespace

NormalizedTA normalize(const TimedAutomaton& a) {
  NormalizedTA n;
  auto sink = a.find_location(kFaultSink);
  auto clock = a.find_clock(kFaultClock);
  if (sink && clock && already_normalized(a, *sink, *clock)) {
    n.automaton = a;
    n.fault_sink = *sink;
    n.fault_clock = *clock;
    return n;
  }
  if (sink || clock)
    throw InputError(std::string("names '") + kFaultSink + "' and '" + kFaultClock + "' are reserved");
  n.automaton = a;
  if (!has_fault_edge(a)) return n;

  TimedAutomaton out(a.alphabet());
  for (const auto& c : a.clock_names()) out.add_clock(c);
  int xf = out.add_clock(kFaultClock);
  for (int l = 0; l < a.num_locations(); ++l) {
    out.add_location(a.location_name(l));
    out.set_invariant(l, a.invariant(l));
    out.set_final(l, a.is_final(l));
    out.set_repeated(l, a.is_repeated(l));
  }
  int lf = out.add_location(kFaultSink);
  out.set_invariant(lf, ClockConstraint{{{xf, Rel::Le, 1}}});
  out.set_repeated(lf);
  out.set_initial(a.initial());
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    TaEdge e = a.edges()[i];
    e.origin = static_cast<int>(i);
    if (a.alphabet().is_fault(e.label)) {
      e.dst = lf;
      e.resets.push_back(xf);
    }
    out.add_edge(e);
  }
  for (EventId o : a.alphabet().observable_events()) out.add_edge({lf, {}, o, {xf}, lf, EdgeRole::Original, -1});
  n.automaton = std::move(out);
  n.fault_sink = lf;
  n.fault_clock = xf;
  return n;
}

SamplingSpec SamplingSpec::from(const Rational& alpha) {
  if (alpha <= 0) throw InputError("sampling rate must be positive");
  return {alpha.numerator(), alpha.denominator()};
}

SampledModel apply_sampling(const TimedAutomaton& a, const Rational& alpha) {
  SampledModel m;
  m.spec = SamplingSpec::from(alpha);
  m.scaled = a;
  TimedAutomaton scaled(a.alphabet());
  for (const auto& c : a.clock_names()) scaled.add_clock(c);
  for (int l = 0; l < a.num_locations(); ++l) {
    scaled.add_location(a.location_name(l));
    scaled.set_invariant(l, a.invariant(l).scaled(m.spec.p));
    scaled.set_final(l, a.is_final(l));
    scaled.set_repeated(l, a.is_repeated(l));
  }
  if (a.num_locations() > 0) scaled.set_initial(a.initial());
  for (const auto& e : a.edges()) {
    TaEdge s = e;
    s.guard = e.guard.scaled(m.spec.p);
    scaled.add_edge(s);
  }
  m.scaled = std::move(scaled);

  TimedAutomaton sampler(a.alphabet());
  int s = sampler.add_clock("$s");
  int l = sampler.add_location("sampler");
  sampler.set_invariant(l, ClockConstraint{{{s, Rel::Le, m.spec.q}}});
  sampler.set_repeated(l);
  sampler.add_edge({l, ClockConstraint{{{s, Rel::Eq, m.spec.q}}}, kEpsilon, {s}, l, EdgeRole::SamplerTick, -1});
  m.sampler = std::move(sampler);
  return m;
}

TimedAutomaton build_twin_A1(const NormalizedTA& n, long long delta, bool divergence,
                             const std::optional<SamplingSpec>& sampling) {
  if (delta < 0) throw InputError("anticipation bound must be non-negative");
  const TimedAutomaton& a = n.automaton;
  const auto& alphabet = a.alphabet();
  TimedAutomaton out(alphabet);

  std::vector<int> clock_map(static_cast<std::size_t>(a.num_clocks()), -1);
  for (int c = 0; c < a.num_clocks(); ++c)
    if (c != n.fault_clock) clock_map[static_cast<std::size_t>(c)] = out.add_clock(a.clock_name(c));
  int y = out.add_clock("$y");
  int s = sampling ? out.add_clock("$s") : -1;

  std::vector<int> orig(static_cast<std::size_t>(a.num_locations()), -1), twin = orig;
  for (int l = 0; l < a.num_locations(); ++l) {
    if (l == n.fault_sink) continue;
    orig[static_cast<std::size_t>(l)] = out.add_location(a.location_name(l));
    out.set_invariant(orig[static_cast<std::size_t>(l)], remap(a.invariant(l), clock_map));
  }
  for (int l = 0; l < a.num_locations(); ++l) {
    if (l == n.fault_sink) continue;
    twin[static_cast<std::size_t>(l)] = out.add_location(a.location_name(l) + "~");
    out.set_invariant(twin[static_cast<std::size_t>(l)], remap(a.invariant(l), clock_map));
  }
  int end = out.add_location("$END");
  int nz = divergence ? out.add_location("$NZ") : -1;
  out.set_initial(orig[static_cast<std::size_t>(a.initial())]);
  if (divergence) {
    out.set_invariant(end, ClockConstraint{{{y, Rel::Le, 1}}});
    out.set_invariant(nz, ClockConstraint{{{y, Rel::Le, 0}}});
    out.set_repeated(nz);
  } else {
    out.set_repeated(end);
  }

  auto kept = [&](const TaEdge& e) {
    return !alphabet.is_fault(e.label) && e.src != n.fault_sink && e.dst != n.fault_sink;
  };
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    const TaEdge& e = a.edges()[i];
    if (!kept(e)) continue;
    EventId label = alphabet.observable(e.label) ? e.label : kEpsilon;
    out.add_edge({orig[static_cast<std::size_t>(e.src)], remap(e.guard, clock_map), label,
                  remap_resets(e.resets, clock_map), orig[static_cast<std::size_t>(e.dst)], EdgeRole::Original,
                  static_cast<int>(i)});
  }
  ClockConstraint switch_guard;
  if (sampling) switch_guard.atoms.push_back({s, Rel::Eq, 0});
  for (int l = 0; l < a.num_locations(); ++l) {
    if (l == n.fault_sink) continue;
    out.add_edge({orig[static_cast<std::size_t>(l)], switch_guard, kEpsilon, {y}, twin[static_cast<std::size_t>(l)],
                  EdgeRole::Switch, l});
  }
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    const TaEdge& e = a.edges()[i];
    if (!kept(e)) continue;
    out.add_edge({twin[static_cast<std::size_t>(e.src)], remap(e.guard, clock_map), kEpsilon,
                  remap_resets(e.resets, clock_map), twin[static_cast<std::size_t>(e.dst)], EdgeRole::Twin,
                  static_cast<int>(i)});
  }
  const long long bound = sampling ? delta * sampling->q : delta;
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    const TaEdge& e = a.edges()[i];
    if (!alphabet.is_fault(e.label) || e.src == n.fault_sink) continue;
    ClockConstraint g = remap(e.guard, clock_map);
    g.atoms.push_back({y, Rel::Le, bound});
    out.add_edge({twin[static_cast<std::size_t>(e.src)], g, kEpsilon, {y}, end, EdgeRole::FaultEnd, static_cast<int>(i)});
  }
  for (int l = 0; l < a.num_locations(); ++l) {
    if (l == n.fault_sink) continue;
    for (EventId o : alphabet.observable_events())
      out.add_edge({twin[static_cast<std::size_t>(l)], {}, o, {}, twin[static_cast<std::size_t>(l)], EdgeRole::TwinLoop, -1});
  }
  // $NZ only passes control back to $END, so an accepting cycle cannot
  // stall there.
  for (EventId o : alphabet.observable_events()) out.add_edge({end, {}, o, {}, end, EdgeRole::EndLoop, -1});
  if (divergence) {
    out.add_edge({end, ClockConstraint{{{y, Rel::Eq, 1}}}, kEpsilon, {y}, nz, EdgeRole::Gadget, -1});
    out.add_edge({nz, {}, kEpsilon, {}, end, EdgeRole::Gadget, -1});
  }
  if (sampling) {
    ClockConstraint tick{{{s, Rel::Eq, sampling->q}}};
    ClockConstraint period{{{s, Rel::Le, sampling->q}}};
    for (int l = 0; l < out.num_locations(); ++l) {
      out.set_invariant(l, out.invariant(l) && period);
      out.add_edge({l, tick, kEpsilon, {s}, l, EdgeRole::SamplerTick, -1});
    }
  }
  return out;
}

TimedAutomaton build_A2(const NormalizedTA& n) {
  const TimedAutomaton& a = n.automaton;
  const auto& alphabet = a.alphabet();
  TimedAutomaton out(alphabet);
  std::vector<int> clock_map(static_cast<std::size_t>(a.num_clocks()), -1);
  for (int c = 0; c < a.num_clocks(); ++c)
    if (c != n.fault_clock) clock_map[static_cast<std::size_t>(c)] = out.add_clock(a.clock_name(c) + "'");
  std::vector<int> id(static_cast<std::size_t>(a.num_locations()), -1);
  for (int l = 0; l < a.num_locations(); ++l) {
    if (l == n.fault_sink) continue;
    id[static_cast<std::size_t>(l)] = out.add_location(a.location_name(l));
    out.set_invariant(id[static_cast<std::size_t>(l)], remap(a.invariant(l), clock_map));
    out.set_repeated(id[static_cast<std::size_t>(l)]);
  }
  out.set_initial(id[static_cast<std::size_t>(a.initial())]);
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    const TaEdge& e = a.edges()[i];
    if (alphabet.is_fault(e.label) || e.src == n.fault_sink || e.dst == n.fault_sink) continue;
    EventId label = alphabet.observable(e.label) ? e.label : kEpsilon;
    out.add_edge({id[static_cast<std::size_t>(e.src)], remap(e.guard, clock_map), label,
                  remap_resets(e.resets, clock_map), id[static_cast<std::size_t>(e.dst)], EdgeRole::Original,
                  static_cast<int>(i)});
  }
  return out;
}

NormalizedTA prepare(const TimedAutomaton& a, const TwinOptions& options) {
  if (options.sampling) {
    Rational alpha(options.sampling->q, options.sampling->p);
    return normalize(apply_sampling(a, alpha).scaled);
  }
  return normalize(a);
}

TwinPlant build_twin_plant(const NormalizedTA& n, long long delta, const TwinOptions& options) {
  TwinPlant t;
  t.a1 = build_twin_A1(n, delta, options.divergence, options.sampling);
  t.a2 = build_A2(n);
  std::vector<bool> hold(static_cast<std::size_t>(t.a1.num_locations()), false);
  if (auto nz = t.a1.find_location("$NZ")) hold[static_cast<std::size_t>(*nz)] = true;
  t.product = ta_product(t.a1, t.a2, hold);
  return t;
}

namespace {

// Concrete times for the discrete edges of a product path, chosen by
// forward zones and backward point picking over an extra global clock.
std::vector<Rational> concretize(const TimedAutomaton& p, const std::vector<int>& edges) {
  const int n = p.num_clocks();
  // The extra clock n tracks global time.
  std::vector<Zone> z{Zone::zero(n + 1)}, pre;
  z[0].constrain(p.invariant(p.initial()));
  int loc = p.initial();
  for (int ei : edges) {
    const TaEdge& e = p.edge(ei);
    Zone u = z.back();
    u.up();
    u.constrain(p.invariant(loc));
    u.constrain(e.guard);
    pre.push_back(u);
    Zone next = u;
    for (int c : e.resets) next.reset(c);
    next.constrain(p.invariant(e.dst));
    if (next.empty()) throw std::logic_error("region lasso has no concrete counterpart");
    z.push_back(std::move(next));
    loc = e.dst;
  }
  std::vector<Rational> times(edges.size());
  auto v = z.back().pick();
  if (!v) throw std::logic_error("empty zone at the end of a region path");
  for (std::size_t i = edges.size(); i-- > 0;) {
    const TaEdge& e = p.edge(edges[i]);
    Zone u = pre[i];
    for (int c = 0; c <= n; ++c) {
      if (c < n && e.resets_clock(c)) continue;
      u.constrain(c + 1, 0, Bound::le((*v)[static_cast<std::size_t>(c)]));
      u.constrain(0, c + 1, Bound::le(-(*v)[static_cast<std::size_t>(c)]));
    }
    auto uv = u.pick();
    if (!uv) throw std::logic_error("backward point picking failed");
    times[i] = (*uv)[static_cast<std::size_t>(n)];
    Zone back = Zone::point(*uv);
    back.down();
    back.intersect(z[i]);
    v = back.pick();
    if (!v) throw std::logic_error("backward delay picking failed");
  }
  return times;
}

TaWitness extract_witness(const TwinPlant& t, const RegionGraph& rg, const Lasso& lasso) {
  const TimedAutomaton& p = t.product.automaton;
  TaWitness w;
  w.lasso = lasso;
  auto node_name = [&](int v) {
    return p.location_name(rg.location[static_cast<std::size_t>(v)]) + " " + describe_region(rg, v, p.clock_names());
  };
  for (int ei : lasso.stem) w.stem_nodes.push_back(node_name(rg.edges[static_cast<std::size_t>(ei)].src));
  for (int ei : lasso.cycle) w.cycle_nodes.push_back(node_name(rg.edges[static_cast<std::size_t>(ei)].src));

  std::vector<int> path;
  for (int ei : lasso.stem)
    if (int te = rg.edges[static_cast<std::size_t>(ei)].ta_edge; te >= 0) path.push_back(te);
  const std::size_t stem_discrete = path.size();
  for (int ei : lasso.cycle)
    if (int te = rg.edges[static_cast<std::size_t>(ei)].ta_edge; te >= 0) path.push_back(te);

  std::vector<Rational> times = concretize(p, path);
  TimedRun product_run;
  Rational prev(0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    product_run.steps.push_back({times[i] - prev, path[i]});
    prev = times[i];
  }
  if (!replay(p, product_run).ok) throw std::logic_error("concretized twin-plant run does not replay");

  Rational last_a1(0), last_a2(0);
  bool switched = false, ended = false;
  Rational fault_time(0);
  Rational stem_end = stem_discrete == 0 ? Rational(0) : times[stem_discrete - 1];
  for (std::size_t i = 0; i < path.size(); ++i) {
    auto [e1, e2] = t.product.edge_parts[static_cast<std::size_t>(path[i])];
    const Rational& now = times[i];
    if (e2 >= 0) {
      if (!switched) ++w.nonfaulty_confusion_steps;
      if (i < stem_discrete) ++w.nonfaulty_cycle_start;
      w.nonfaulty.steps.push_back({now - last_a2, t.a2.edge(e2).origin});
      last_a2 = now;
    }
    if (e1 < 0) continue;
    const TaEdge& e = t.a1.edge(e1);
    switch (e.role) {
      case EdgeRole::Original:
        w.prefaulty.steps.push_back({now - last_a1, e.origin});
        last_a1 = now;
        break;
      case EdgeRole::Switch:
        switched = true;
        w.switch_time = now;
        w.prefaulty.tail = now - last_a1;
        last_a1 = now;
        break;
      case EdgeRole::Twin:
        if (!ended) {
          w.fault_extension.steps.push_back({now - last_a1, e.origin});
          last_a1 = now;
        }
        break;
      case EdgeRole::FaultEnd:
        ended = true;
        fault_time = now;
        w.fault_extension.steps.push_back({now - last_a1, e.origin});
        last_a1 = now;
        break;
      default:
        break;
    }
  }
  if (!switched || !ended) throw std::logic_error("twin-plant lasso misses the switch or the fault");
  w.fault_horizon = fault_time - w.switch_time;
  Rational end_time = times.empty() ? Rational(0) : times.back();
  w.nonfaulty.tail = end_time - last_a2;
  w.cycle_duration = end_time - stem_end;
  return w;
}

}  // namespace

TaVerdict check_delta_predictable(const TimedAutomaton& a, long long delta, const TwinOptions& options) {
  if (delta < 0) throw InputError("anticipation bound must be non-negative");
  TaVerdict v;
  v.delta = delta;
  v.sampling = options.sampling;
  v.anticipation = options.sampling ? Rational(delta) * options.sampling->rate() : Rational(delta);
  NormalizedTA n = prepare(a, options);
  v.kappa = min_time_bound(n.automaton);
  if (options.use_kappa_shortcut && !v.kappa) {
    v.kappa_shortcut = true;
    return v;
  }
  TwinPlant t = build_twin_plant(n, delta, options);
  RegionGraphOptions ro;
  ro.parallel = options.parallel;
  RegionGraph rg = region_graph(t.product.automaton, ro);
  v.region_nodes = rg.num_nodes();
  v.region_edges = static_cast<int>(rg.edges.size());
  BuchiResult b = buchi_empty(rg);
  if (b.empty) return v;
  v.predictable = false;
  TaWitness w = extract_witness(t, rg, *b.lasso);
  w.concretized_prefix = word_of_run(n.automaton, w.prefaulty);
  v.witness = std::move(w);
  return v;
}

MaxDelta max_delta(const TimedAutomaton& a, const TwinOptions& options) {
  MaxDelta m;
  m.sampling = options.sampling;
  NormalizedTA n = prepare(a, options);
  m.kappa = min_time_bound(n.automaton);
  if (!m.kappa) {
    m.bound = AnticipationBound::infinite();
    return m;
  }
  auto predictable = [&](long long d) { return check_delta_predictable(a, d, options).predictable; };
  if (!predictable(0)) {
    m.bound = AnticipationBound::not_predictable();
    return m;
  }
  long long q = options.sampling ? options.sampling->q : 1;
  long long hi = (*m.kappa + q - 1) / q;
  long long lo = 0;
  if (predictable(hi)) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      long long mid = lo + (hi - lo) / 2;
      if (predictable(mid))
        lo = mid;
      else
        hi = mid;
    }
  }
  m.bound = AnticipationBound::finite(lo);
  m.anticipation = options.sampling ? Rational(lo) * options.sampling->rate() : Rational(lo);
  return m;
}

TimedAutomaton reduce_reachability(const TimedAutomaton& a, int l) {
  if (a.num_clocks() == 0) throw InputError("the reduction needs at least one clock");
  if (l < 0 || l >= a.num_locations()) throw InputError("target location out of range");
  TimedAutomaton out = a;
  const std::string sink = "END'";
  if (out.find_location(sink)) throw InputError("location name END' is reserved by the reduction");
  std::string u = "u";
  for (int i = 1; out.alphabet().find(u); ++i) u = "u" + std::to_string(i);
  std::vector<EventId> loops;
  for (std::size_t e = 0; e < a.alphabet().size(); ++e)
    if (!a.alphabet().is_fault(static_cast<EventId>(e))) loops.push_back(static_cast<EventId>(e));
  EventId ue = out.mutable_alphabet().add_unobservable(u);
  int end = out.add_location(sink);
  out.set_invariant(end, ClockConstraint{{{0, Rel::Le, 1}}});
  out.set_repeated(end);
  out.add_edge({l, {}, a.alphabet().fault(), {0}, end, EdgeRole::Original, -1});
  out.add_edge({l, {}, ue, {0}, end, EdgeRole::Original, -1});
  for (EventId e : loops) out.add_edge({end, ClockConstraint{{{0, Rel::Eq, 1}}}, e, {0}, end, EdgeRole::Original, -1});
  return out;
}

}  // namespace tapred
