// Command-line front end: check, max-bound, export-twin, predict, reduce, validate.
#include "tapred/errors.hpp"
#include "tapred/fa_predict.hpp"
#include "tapred/model_io.hpp"
#include "tapred/oracle.hpp"
#include "tapred/predictor.hpp"
#include "tapred/region_graph.hpp"
#include "tapred/report.hpp"
#include "tapred/ta_predict.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace tapred;
using nlohmann::json;

enum Exit { kPredictable = 0, kNotPredictable = 1, kInputError = 2, kOracleMismatch = 3 };

struct Config {
  std::string model;
  long long bound = -1;
  std::string sample;
  bool allow_zeno = false;
  std::string witness;
  bool oracle = false;
  std::string dump_regions;
  std::string format = "human";
  std::optional<std::uint64_t> seed;
  bool unbounded_ok = false;
  std::string target;
  std::string dot;
  std::string trace;
  std::string output;
};

bool human(const Config& c) { return c.format == "human"; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

void emit(const Config& c, const json& j) {
  if (!human(c)) std::cout << j.dump(2) << "\n";
}

TwinOptions twin_options(const Config& c) {
  TwinOptions o;
  o.divergence = !c.allow_zeno;
  if (!c.sample.empty()) o.sampling = SamplingSpec::from(parse_rational(c.sample));
  return o;
}

long long require_bound(const Config& c) {
  if (c.bound < 0) throw InputError("--bound is required and must be non-negative");
  return c.bound;
}

// Reachable locations of the normalized model must bound some clock.
std::vector<std::string> lint_timed(const TimedAutomaton& a, bool unbounded_ok) {
  std::vector<std::string> lints;
  NormalizedTA n = normalize(a);
  auto reach = graph_reachable(n.automaton);
  for (int l : unbounded_locations(n.automaton)) {
    if (!reach[static_cast<std::size_t>(l)]) continue;
    std::string msg = "location '" + n.automaton.location_name(l) + "' bounds no clock from above";
    if (!unbounded_ok) throw InputError(msg + " (pass --unbounded-ok to proceed anyway)");
    lints.push_back(msg);
  }
  RegionGraph g = region_graph(n.automaton);
  for (int v : silent_cycles(g, n.automaton))
    lints.push_back("reachable cycle without observable events through '" +
                    n.automaton.location_name(g.location[static_cast<std::size_t>(v)]) + "'");
  return lints;
}

std::vector<std::string> lint_untimed(const FiniteAutomaton& a) {
  std::vector<std::string> lints;
  auto reach = forward_reachable(a, {a.initial()});
  auto silent = [&](const FaEdge& e) { return !a.alphabet().observable(e.label); };
  // A location on a silent cycle reaches itself through silent edges.
  for (int q = 0; q < a.num_locations(); ++q) {
    if (!reach[static_cast<std::size_t>(q)]) continue;
    for (int ei : a.out_edges()[static_cast<std::size_t>(q)]) {
      const FaEdge& e = a.edges()[static_cast<std::size_t>(ei)];
      if (!silent(e)) continue;
      if (forward_reachable(a, {e.dst}, silent)[static_cast<std::size_t>(q)]) {
        lints.push_back("reachable cycle without observable events through '" + a.location_name(q) + "'");
        break;
      }
    }
  }
  return lints;
}

void print_lints(const std::vector<std::string>& lints) {
  for (const auto& l : lints) std::cerr << "warning: " << l << "\n";
}

std::string words(const EventAlphabet& al, const UntimedWord& w) {
  std::string s;
  for (EventId e : w.events) s += (s.empty() ? "" : " ") + al.name(e);
  return s.empty() ? "(empty)" : s;
}

int check_fa(const Config& c, const FiniteAutomaton& a) {
  int k = static_cast<int>(require_bound(c));
  print_lints(lint_untimed(a));
  FaVerdict v = check_k_predictable(a, k);
  json j = verdict_json(a, k, v);
  int code = v.predictable ? kPredictable : kNotPredictable;
  if (c.oracle) {
    bool o = oracle::fa_oracle_k_predictable(a, k);
    json oj = {{"predictable", o}, {"agree", o == v.predictable}};
    if (k == 0) {
      bool gl = oracle::gl_oracle(a);
      oj["gl_predictable"] = gl;
      oj["agree"] = oj["agree"].get<bool>() && gl == v.predictable;
    }
    if (v.witness) {
      auto check = oracle::validate_witness(a, k, *v.witness);
      oj["witness_valid"] = check.ok;
      if (!check.ok) oj["witness_error"] = check.error;
      oj["agree"] = oj["agree"].get<bool>() && check.ok;
    }
    if (c.seed) {
      std::mt19937_64 rng(*c.seed);
      int mismatches = 0;
      for (int i = 0; i < 200; ++i) {
        FiniteAutomaton r = oracle::random_fa(rng);
        int rk = i % 4;
        if (check_k_predictable(r, rk).predictable != oracle::fa_oracle_k_predictable(r, rk)) ++mismatches;
      }
      oj["corpus"] = {{"seed", *c.seed}, {"size", 200}, {"mismatches", mismatches}};
      if (mismatches) oj["agree"] = false;
    }
    j["oracle"] = oj;
    if (!oj["agree"].get<bool>()) code = kOracleMismatch;
  }
  if (!c.witness.empty() && v.witness) write_file(c.witness, witness_json(a, k, *v.witness).dump(2) + "\n");
  emit(c, j);
  if (human(c)) {
    if (v.predictable) {
      std::cout << "predictable: the automaton is " << k << "-predictable\n";
    } else {
      const FaWitness& w = *v.witness;
      std::cout << "not predictable: the automaton is not " << k << "-predictable\n";
      if (w.confusion_pair.first >= 0)
        std::cout << "  confusing pair (" << a.location_name(w.confusion_pair.first) << ","
                  << a.location_name(w.confusion_pair.second) << ")\n";
      std::cout << "  prefaulty word: " << words(a.alphabet(), w.prefaulty) << "\n"
                << "  fault-free stem: " << words(a.alphabet(), w.stem) << "\n"
                << "  fault-free cycle: " << words(a.alphabet(), w.cycle) << "\n";
    }
    if (j.contains("oracle")) std::cout << "  oracle: " << j["oracle"].dump() << "\n";
  }
  return code;
}

int check_ta(const Config& c, const TimedAutomaton& a) {
  long long d = require_bound(c);
  print_lints(lint_timed(a, c.unbounded_ok));
  TwinOptions o = twin_options(c);
  TaVerdict v = check_delta_predictable(a, d, o);
  NormalizedTA n = prepare(a, o);
  json j = verdict_json(n, v, o.divergence);
  int code = v.predictable ? kPredictable : kNotPredictable;
  if (c.oracle && v.witness) {
    long long units = o.sampling ? d * o.sampling->q : d;
    auto check = oracle::validate_witness(n, units, *v.witness, o.divergence);
    j["oracle"] = {{"witness_valid", check.ok}};
    if (!check.ok) {
      j["oracle"]["witness_error"] = check.error;
      code = kOracleMismatch;
    }
  }
  if (!c.dump_regions.empty()) {
    TwinPlant t = build_twin_plant(n, d, o);
    RegionGraph g = region_graph(t.product.automaton);
    write_file(c.dump_regions, region_graph_dot(g, t.product.automaton));
  }
  if (!c.witness.empty() && v.witness) write_file(c.witness, witness_json(n, v, o.divergence).dump(2) + "\n");
  emit(c, j);
  if (human(c)) {
    std::string what = o.sampling ? "(" + to_string(o.sampling->rate()) + ", " + std::to_string(d) + ")-predictable"
                                  : std::to_string(d) + "-predictable";
    if (v.predictable) {
      std::cout << "predictable: the automaton is " << what;
      if (v.kappa_shortcut) std::cout << " (no fault is reachable)";
      std::cout << "\n";
    } else {
      const TaWitness& w = *v.witness;
      // Witness times are in model units, scaled by p when sampled.
      Rational p(o.sampling ? o.sampling->p : 1);
      std::cout << "not predictable: the automaton is not " << what << "\n"
                << "  switch at " << to_string(w.switch_time / p) << ", fault enabled "
                << to_string(w.fault_horizon / p) << " later\n";
    }
    if (o.sampling) std::cout << "  anticipation " << to_string(v.anticipation) << " time units\n";
    std::cout << "  region graph: " << v.region_nodes << " nodes, " << v.region_edges << " edges\n";
    if (j.contains("oracle")) std::cout << "  oracle: " << j["oracle"].dump() << "\n";
  }
  return code;
}

std::string describe(const AnticipationBound& b) {
  switch (b.kind) {
    case AnticipationBound::Kind::Finite:
      return std::to_string(b.value);
    case AnticipationBound::Kind::Infinite:
      return "infinite";
    case AnticipationBound::Kind::NotPredictable:
      break;
  }
  return "not-predictable";
}

int max_bound(const Config& c, const Model& m) {
  json j = {{"schema", kSchemaVersion}};
  AnticipationBound b;
  std::string note;
  if (!m.timed()) {
    const FiniteAutomaton& a = m.fa();
    print_lints(lint_untimed(a));
    b = max_k(a);
    auto kappa = kappa_fa(a);
    j["type"] = "fa";
    j["kappa"] = kappa ? json(*kappa) : json("infinite");
    if (b.kind == AnticipationBound::Kind::Finite) note = "largest k is M-1 = " + std::to_string(b.value);
  } else {
    const TimedAutomaton& a = m.ta();
    print_lints(lint_timed(a, c.unbounded_ok));
    TwinOptions o = twin_options(c);
    MaxDelta md = max_delta(a, o);
    b = md.bound;
    j["type"] = "ta";
    j["kappa"] = md.kappa ? json(*md.kappa) : json("infinite");
    j["sampling"] = o.sampling ? json(to_string(o.sampling->rate())) : json(nullptr);
    j["divergence"] = o.divergence;
    if (b.kind == AnticipationBound::Kind::Finite) {
      j["anticipation"] = to_string(md.anticipation);
      note = o.sampling ? "D = " + std::to_string(b.value) + ", anticipation " + to_string(md.anticipation) + " time units"
                        : "Δ-predictable for every Δ <= " + std::to_string(b.value);
    }
  }
  j["max_bound"] = bound_json(b);
  emit(c, j);
  if (human(c)) {
    std::cout << describe(b) << "\n";
    if (!note.empty()) std::cout << "  " << note << "\n";
  }
  return b.kind == AnticipationBound::Kind::NotPredictable ? kNotPredictable : kPredictable;
}

int export_twin(const Config& c, const Model& m) {
  long long d = require_bound(c);
  json j = {{"schema", kSchemaVersion}};
  std::string dot;
  if (!m.timed()) {
    TwinFa t = build_twin_fa(m.fa(), static_cast<int>(d));
    FaProduct p = fa_product(t.a1, t.a2);
    dot = to_dot(p.automaton, "twin");
    j["type"] = "fa";
    j["locations"] = p.automaton.num_locations();
    j["edges"] = p.automaton.edges().size();
  } else {
    TwinOptions o = twin_options(c);
    NormalizedTA n = prepare(m.ta(), o);
    TwinPlant t = build_twin_plant(n, d, o);
    dot = to_dot(t.product.automaton, "twin");
    j["type"] = "ta";
    j["locations"] = t.product.automaton.num_locations();
    j["edges"] = t.product.automaton.edges().size();
    j["clocks"] = t.product.automaton.clock_names();
  }
  if (c.dot.empty()) {
    std::cout << dot;
    return kPredictable;
  }
  write_file(c.dot, dot);
  if (human(c))
    std::cout << "twin plant: " << j["locations"] << " locations, " << j["edges"] << " edges -> " << c.dot << "\n";
  else
    emit(c, j);
  return kPredictable;
}

int predict(const Config& c, const Model& m) {
  if (!m.timed()) throw InputError("predict needs a timed model");
  if (c.trace.empty()) throw InputError("--trace is required");
  long long d = require_bound(c);
  const TimedAutomaton& a = m.ta();
  print_lints(lint_timed(a, c.unbounded_ok));
  Rational alpha = c.sample.empty() ? Rational(1) : parse_rational(c.sample);
  if (alpha <= Rational(0)) throw InputError("sampling rate must be positive");
  TimedWord trace = parse_trace(a.alphabet(), read_file(c.trace));
  TwinOptions o = twin_options(c);
  if (!o.sampling) o.sampling = SamplingSpec::from(alpha);
  if (!check_delta_predictable(a, d, o).predictable)
    std::cerr << "warning: the model is not (" << to_string(alpha) << ", " << d
              << ")-predictable; verdicts are best effort\n";
  PredictionTrace out = run_predictor(normalize(a), d, alpha, trace);
  for (const auto& p : out.points) {
    if (human(c))
      std::cout << to_string(p.time) << " " << p.verdict << "\n";
    else
      std::cout << json{{"time", to_string(p.time)}, {"verdict", p.verdict}}.dump() << "\n";
  }
  if (out.inconsistent) {
    std::string msg = "observation inconsistent with fault-free behaviour at trace entry " + std::to_string(out.failed_at);
    if (human(c))
      std::cout << "error: " << msg << "\n";
    else
      std::cout << json{{"error", msg}, {"failed_at", out.failed_at}}.dump() << "\n";
    return kNotPredictable;
  }
  return kPredictable;
}

int reduce(const Config& c, const Model& m) {
  if (!m.timed()) throw InputError("reduce needs a timed model");
  if (c.target.empty()) throw InputError("--target is required");
  const TimedAutomaton& a = m.ta();
  TimedAutomaton r = reduce_reachability(a, a.location(c.target));
  std::string text = model_to_json(r).dump(2) + "\n";
  if (c.output.empty())
    std::cout << text;
  else
    write_file(c.output, text);
  return kPredictable;
}

int validate(const Config& c, const Model& m) {
  std::vector<std::string> lints = m.timed() ? lint_timed(m.ta(), true) : lint_untimed(m.fa());
  json j = {{"schema", kSchemaVersion}, {"type", m.timed() ? "ta" : "fa"}, {"lints", lints}};
  int code = kPredictable;
  std::optional<oracle::Check> check;
  if (!c.witness.empty()) {
    json w = json::parse(read_file(c.witness), nullptr, false);
    if (w.is_discarded()) throw InputError("witness file is not JSON");
    if (!m.timed()) {
      ParsedFaWitness p = parse_fa_witness(m.fa(), w);
      check = oracle::validate_witness(m.fa(), p.bound, p.witness);
    } else {
      TwinOptions o;
      if (w.contains("sampling") && w["sampling"].is_string())
        o.sampling = SamplingSpec::from(parse_rational(w["sampling"].get<std::string>()));
      NormalizedTA n = prepare(m.ta(), o);
      ParsedTaWitness p = parse_ta_witness(n.automaton, w);
      long long units = p.sampling ? p.bound * p.sampling->q : p.bound;
      check = oracle::validate_witness(n, units, p.witness, p.divergence);
    }
    j["witness_valid"] = check->ok;
    if (!check->ok) {
      j["witness_error"] = check->error;
      code = kNotPredictable;
    }
  }
  emit(c, j);
  if (human(c)) {
    std::cout << "model ok";
    if (!lints.empty()) std::cout << ", " << lints.size() << " warning(s)";
    std::cout << "\n";
    for (const auto& l : lints) std::cout << "  warning: " << l << "\n";
    if (check) std::cout << "witness " << (check->ok ? "valid" : "invalid: " + check->error) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded fault predictability for finite and timed automata"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--seed", c.seed, "Seed for --oracle random corpora");

  auto model = [&](CLI::App* s) { s->add_option("--model", c.model, "Model file (JSON)")->required(); };
  auto common = [&](CLI::App* s) {
    s->add_option("--sample", c.sample, "Sampling rate q/p");
    s->add_flag("--allow-zeno", c.allow_zeno, "Accept Zeno fault-free runs");
    s->add_flag("--unbounded-ok", c.unbounded_ok, "Proceed on locations without a clock upper bound");
  };

  auto* check = app.add_subcommand("check", "Decide k- or Δ-predictability");
  model(check);
  common(check);
  check->add_option("--bound", c.bound, "Anticipation bound k or Δ")->required();
  check->add_option("--witness", c.witness, "Write the counterexample to this file");
  check->add_flag("--oracle", c.oracle, "Cross-check against brute force");
  check->add_option("--dump-regions", c.dump_regions, "Write the twin-plant region graph (DOT)");

  auto* maxb = app.add_subcommand("max-bound", "Largest anticipation bound");
  model(maxb);
  common(maxb);

  auto* twin = app.add_subcommand("export-twin", "Write the twin plant as DOT");
  model(twin);
  common(twin);
  twin->add_option("--bound", c.bound, "Anticipation bound")->required();
  twin->add_option("--dot", c.dot, "Output file (stdout if absent)");

  auto* pred = app.add_subcommand("predict", "Run the predictor over a timed trace");
  model(pred);
  common(pred);
  pred->add_option("--bound", c.bound, "Anticipation bound in sampling periods")->required();
  pred->add_option("--trace", c.trace, "JSON-lines trace")->required();

  auto* red = app.add_subcommand("reduce", "Reachability-to-predictability gadget");
  model(red);
  red->add_option("--target", c.target, "Location whose reachability is encoded")->required();
  red->add_option("--output", c.output, "Output file (stdout if absent)");

  auto* val = app.add_subcommand("validate", "Lint a model, optionally replay a witness");
  model(val);
  val->add_flag("--unbounded-ok", c.unbounded_ok, "Do not flag locations without a clock upper bound");
  val->add_option("--witness", c.witness, "Witness file written by check --witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    Model m = load_model(c.model);
    if (check->parsed()) return m.timed() ? check_ta(c, m.ta()) : check_fa(c, m.fa());
    if (maxb->parsed()) return max_bound(c, m);
    if (twin->parsed()) return export_twin(c, m);
    if (pred->parsed()) return predict(c, m);
    if (red->parsed()) return reduce(c, m);
    if (val->parsed()) return validate(c, m);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
