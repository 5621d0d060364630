#include "tapred/report.hpp"

#include "tapred/errors.hpp"

#include <sstream>

namespace tapred {

using nlohmann::json;

namespace {

std::string event_name(const EventAlphabet& al, EventId e) {
  return e == kEpsilon ? std::string(kEpsilonName) : al.name(e);
}

Rational rational(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  throw InputError(where + " must be a number or a \"p/q\" string");
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("witness lacks field '") + key + "'");
  return j.at(key);
}

UntimedWord untimed(const EventAlphabet& al, const json& j) {
  UntimedWord w;
  for (const auto& e : field(j, "events")) w.events.push_back(al.label(e.get<std::string>()));
  w.duration = field(j, "duration").get<std::size_t>();
  return w;
}

TimedRun timed_run(const TimedAutomaton& a, const json& j) {
  TimedRun r;
  for (const auto& s : field(j, "steps")) {
    int e = field(s, "edge").get<int>();
    if (e < 0 || e >= static_cast<int>(a.edges().size())) throw InputError("witness edge index out of range");
    r.steps.push_back({rational(field(s, "delay"), "delay"), e});
  }
  r.tail = rational(field(j, "tail"), "tail");
  return r;
}

}  // namespace

json to_json(const EventAlphabet& alphabet, const UntimedWord& w) {
  json events = json::array();
  for (EventId e : w.events) events.push_back(event_name(alphabet, e));
  return {{"events", events}, {"duration", w.duration}};
}

json to_json(const TimedAutomaton& a, const TimedRun& run) {
  json steps = json::array();
  for (const auto& s : run.steps) {
    const TaEdge& e = a.edge(s.edge);
    steps.push_back({{"delay", to_string(s.delay)},
                     {"edge", s.edge},
                     {"event", event_name(a.alphabet(), e.label)},
                     {"src", a.location_name(e.src)},
                     {"dst", a.location_name(e.dst)}});
  }
  return {{"steps", steps}, {"tail", to_string(run.tail)}};
}

json to_json(const EventAlphabet& alphabet, const TimedWord& w) {
  json delays = json::array(), events = json::array();
  for (const auto& d : w.delays) delays.push_back(to_string(d));
  for (EventId e : w.events) events.push_back(event_name(alphabet, e));
  return {{"delays", delays}, {"events", events}};
}

json witness_json(const FiniteAutomaton& a, int k, const FaWitness& w) {
  const auto& al = a.alphabet();
  json j = {{"schema", kSchemaVersion},
            {"type", "fa"},
            {"bound", k},
            {"prefaulty", to_json(al, w.prefaulty)},
            {"stem", to_json(al, w.stem)},
            {"cycle", to_json(al, w.cycle)},
            {"confusion_steps", w.confusion_steps}};
  if (w.confusion_pair.first >= 0)
    j["confusion_pair"] = {a.location_name(w.confusion_pair.first), a.location_name(w.confusion_pair.second)};
  return j;
}

json witness_json(const NormalizedTA& n, const TaVerdict& v, bool divergence) {
  const TaWitness& w = *v.witness;
  const TimedAutomaton& a = n.automaton;
  return {{"schema", kSchemaVersion},
          {"type", "ta"},
          {"bound", v.delta},
          {"sampling", v.sampling ? json(to_string(v.sampling->rate())) : json(nullptr)},
          {"divergence", divergence},
          {"prefaulty", to_json(a, w.prefaulty)},
          {"switch_time", to_string(w.switch_time)},
          {"fault_extension", to_json(a, w.fault_extension)},
          {"fault_horizon", to_string(w.fault_horizon)},
          {"nonfaulty", to_json(a, w.nonfaulty)},
          {"nonfaulty_confusion_steps", w.nonfaulty_confusion_steps},
          {"nonfaulty_cycle_start", w.nonfaulty_cycle_start},
          {"cycle_duration", to_string(w.cycle_duration)},
          {"stem_nodes", w.stem_nodes},
          {"cycle_nodes", w.cycle_nodes},
          {"concretized_prefix", to_json(a.alphabet(), w.concretized_prefix)}};
}

ParsedFaWitness parse_fa_witness(const FiniteAutomaton& a, const json& j) {
  try {
    if (field(j, "type") != "fa") throw InputError("not an untimed witness");
    ParsedFaWitness p;
    p.bound = field(j, "bound").get<int>();
    p.witness.prefaulty = untimed(a.alphabet(), field(j, "prefaulty"));
    p.witness.stem = untimed(a.alphabet(), field(j, "stem"));
    p.witness.cycle = untimed(a.alphabet(), field(j, "cycle"));
    if (j.contains("confusion_steps")) p.witness.confusion_steps = j["confusion_steps"].get<std::size_t>();
    return p;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed witness: ") + e.what());
  }
}

ParsedTaWitness parse_ta_witness(const TimedAutomaton& normalized, const json& j) {
  try {
    if (field(j, "type") != "ta") throw InputError("not a timed witness");
    ParsedTaWitness p;
    p.bound = field(j, "bound").get<long long>();
    if (j.contains("sampling") && !j["sampling"].is_null())
      p.sampling = SamplingSpec::from(rational(j["sampling"], "sampling"));
    if (j.contains("divergence")) p.divergence = j["divergence"].get<bool>();
    TaWitness& w = p.witness;
    w.prefaulty = timed_run(normalized, field(j, "prefaulty"));
    w.switch_time = rational(field(j, "switch_time"), "switch_time");
    w.fault_extension = timed_run(normalized, field(j, "fault_extension"));
    w.fault_horizon = rational(field(j, "fault_horizon"), "fault_horizon");
    w.nonfaulty = timed_run(normalized, field(j, "nonfaulty"));
    w.nonfaulty_confusion_steps = field(j, "nonfaulty_confusion_steps").get<std::size_t>();
    w.nonfaulty_cycle_start = field(j, "nonfaulty_cycle_start").get<std::size_t>();
    w.cycle_duration = rational(field(j, "cycle_duration"), "cycle_duration");
    return p;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed witness: ") + e.what());
  }
}

json bound_json(const AnticipationBound& b) {
  switch (b.kind) {
    case AnticipationBound::Kind::Finite:
      return b.value;
    case AnticipationBound::Kind::Infinite:
      return "infinite";
    case AnticipationBound::Kind::NotPredictable:
      break;
  }
  return "not-predictable";
}

json verdict_json(const FiniteAutomaton& a, int k, const FaVerdict& v) {
  json j = {{"schema", kSchemaVersion}, {"type", "fa"}, {"bound", k}, {"predictable", v.predictable}};
  auto kappa = kappa_fa(a);
  j["kappa"] = kappa ? json(*kappa) : json("infinite");
  if (v.witness) j["witness"] = witness_json(a, k, *v.witness);
  return j;
}

json verdict_json(const NormalizedTA& n, const TaVerdict& v, bool divergence) {
  json j = {{"schema", kSchemaVersion},
            {"type", "ta"},
            {"bound", v.delta},
            {"anticipation", to_string(v.anticipation)},
            {"sampling", v.sampling ? json(to_string(v.sampling->rate())) : json(nullptr)},
            {"divergence", divergence},
            {"predictable", v.predictable},
            {"kappa", v.kappa ? json(*v.kappa) : json("infinite")},
            {"region_nodes", v.region_nodes},
            {"region_edges", v.region_edges}};
  if (v.witness) j["witness"] = witness_json(n, v, divergence);
  return j;
}

TimedWord parse_trace(const EventAlphabet& alphabet, const std::string& jsonl) {
  TimedWord w;
  std::istringstream in(jsonl);
  std::string line;
  int lineno = 0;
  bool tail_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = "trace line " + std::to_string(lineno);
    if (tail_seen) throw InputError(where + ": entries after the final delay-only line");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": " + e.what());
    }
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
      if (key != "delay" && key != "event") throw InputError(where + ": unknown field '" + key + "'");
    Rational d = j.contains("delay") ? rational(j["delay"], where + " delay") : Rational(0);
    if (d < Rational(0)) throw InputError(where + ": negative delay");
    w.delays.back() += d;
    if (!j.contains("event")) {
      tail_seen = true;
      continue;
    }
    if (!j["event"].is_string()) throw InputError(where + ": event must be a string");
    EventId e = alphabet.label(j["event"].get<std::string>());
    if (!alphabet.observable(e)) throw InputError(where + ": event '" + j["event"].get<std::string>() + "' is not observable");
    w.events.push_back(e);
    w.delays.push_back(Rational(0));
  }
  return w;
}

}  // namespace tapred
