#include "tapred/model_io.hpp"

#include "tapred/errors.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace tapred {

using nlohmann::json;

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

[[noreturn]] void guard_error(std::string_view text, std::size_t pos, const std::string& what) {
  throw InputError("guard '" + std::string(text) + "': " + what + " at column " + std::to_string(pos + 1));
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void check_fields(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw InputError("unknown field '" + key + "' in " + where);
}

std::vector<std::string> strings(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw InputError(where + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::string str(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) throw InputError(where + " needs a string field '" + key + "'");
  return obj[key].get<std::string>();
}

EventAlphabet parse_events(const json& j) {
  check_fields(j, {"observable", "unobservable", "fault"}, "events");
  std::vector<std::string> obs, unobs;
  if (j.contains("observable")) obs = strings(j["observable"], "events.observable");
  if (j.contains("unobservable")) unobs = strings(j["unobservable"], "events.unobservable");
  return EventAlphabet(obs, unobs, str(j, "fault", "events"));
}

template <typename Automaton>
void add_locations(Automaton& a, const json& root) {
  for (const auto& name : strings(root.at("locations"), "locations")) a.add_location(name);
  a.set_initial(a.location(str(root, "initial", "model")));
  if (root.contains("final"))
    for (const auto& name : strings(root["final"], "final")) a.set_final(a.location(name));
  if (root.contains("repeated")) {
    for (const auto& name : strings(root["repeated"], "repeated")) a.set_repeated(a.location(name));
  } else {
    for (int l = 0; l < a.num_locations(); ++l) a.set_repeated(l);
  }
}

FiniteAutomaton parse_fa(const json& root) {
  check_fields(root, {"type", "locations", "initial", "events", "edges", "final", "repeated"}, "fa model");
  FiniteAutomaton a(parse_events(root.at("events")));
  add_locations(a, root);
  if (!root.contains("edges") || !root["edges"].is_array()) throw InputError("model needs an 'edges' array");
  for (const auto& e : root["edges"]) {
    check_fields(e, {"src", "event", "dst"}, "fa edge");
    a.add_edge(a.location(str(e, "src", "edge")), a.alphabet().label(str(e, "event", "edge")),
               a.location(str(e, "dst", "edge")));
  }
  return a;
}

TimedAutomaton parse_ta(const json& root) {
  check_fields(root, {"type", "locations", "initial", "events", "edges", "final", "repeated", "invariants", "clocks"},
               "ta model");
  TimedAutomaton a(parse_events(root.at("events")));
  const bool declared = root.contains("clocks");
  if (declared)
    for (const auto& c : strings(root["clocks"], "clocks")) {
      if (c.empty() || !ident_start(c[0])) throw InputError("invalid clock name '" + c + "'");
      for (char ch : c)
        if (!ident_char(ch)) throw InputError("invalid clock name '" + c + "'");
      a.add_clock(c);
    }
  auto clock = [&](const std::string& name) -> int {
    if (auto c = a.find_clock(name)) return *c;
    if (declared) return -1;
    return a.add_clock(name);
  };
  add_locations(a, root);

  if (root.contains("invariants")) {
    const json& inv = root["invariants"];
    if (!inv.is_object()) throw InputError("invariants must map locations to guards");
    // Location order keeps implicit clock numbering deterministic.
    for (int l = 0; l < a.num_locations(); ++l) {
      const std::string& name = a.location_name(l);
      if (!inv.contains(name)) continue;
      if (!inv[name].is_string()) throw InputError("invariant of '" + name + "' must be a string");
      a.set_invariant(l, parse_guard(inv[name].get<std::string>(), clock));
    }
    for (const auto& [name, value] : inv.items()) a.location(name);
  }
  if (!root.contains("edges") || !root["edges"].is_array()) throw InputError("model needs an 'edges' array");
  for (const auto& e : root["edges"]) {
    check_fields(e, {"src", "event", "dst", "guard", "resets"}, "ta edge");
    TaEdge edge;
    edge.src = a.location(str(e, "src", "edge"));
    edge.dst = a.location(str(e, "dst", "edge"));
    edge.label = a.alphabet().label(str(e, "event", "edge"));
    if (e.contains("guard")) {
      if (!e["guard"].is_string()) throw InputError("edge guard must be a string");
      edge.guard = parse_guard(e["guard"].get<std::string>(), clock);
    }
    if (e.contains("resets"))
      for (const auto& c : strings(e["resets"], "resets")) {
        int id = clock(c);
        if (id < 0) throw InputError("reset of undeclared clock '" + c + "'");
        edge.resets.push_back(id);
      }
    a.add_edge(std::move(edge));
  }
  return a;
}

template <typename Automaton>
void common_json(const Automaton& a, json& j) {
  const auto& alphabet = a.alphabet();
  json obs = json::array(), unobs = json::array();
  for (EventId e : alphabet.observable_events()) obs.push_back(alphabet.name(e));
  for (EventId e : alphabet.unobservable_events()) unobs.push_back(alphabet.name(e));
  j["events"] = {{"observable", obs}, {"unobservable", unobs}, {"fault", alphabet.name(alphabet.fault())}};
  j["locations"] = a.location_names();
  j["initial"] = a.location_name(a.initial());
  json fin = json::array(), rep = json::array();
  for (int l = 0; l < a.num_locations(); ++l) {
    if (a.is_final(l)) fin.push_back(a.location_name(l));
    if (a.is_repeated(l)) rep.push_back(a.location_name(l));
  }
  j["final"] = fin;
  j["repeated"] = rep;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

ClockConstraint parse_guard(std::string_view text, const std::function<int(const std::string&)>& clock) {
  ClockConstraint out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (text.substr(i).starts_with("true")) {
    std::size_t j = i + 4;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j == text.size()) return out;
  }
  while (true) {
    skip();
    std::size_t start = i;
    if (i >= text.size() || !ident_start(text[i])) guard_error(text, i, "expected a clock name");
    while (i < text.size() && ident_char(text[i])) ++i;
    std::string name(text.substr(start, i - start));
    int c = clock(name);
    if (c < 0) guard_error(text, start, "unknown clock '" + name + "'");
    skip();
    Rel rel;
    auto rest = text.substr(i);
    if (rest.starts_with("<=")) {
      rel = Rel::Le;
      i += 2;
    } else if (rest.starts_with(">=")) {
      rel = Rel::Ge;
      i += 2;
    } else if (rest.starts_with("==")) {
      rel = Rel::Eq;
      i += 2;
    } else if (rest.starts_with("<")) {
      rel = Rel::Lt;
      i += 1;
    } else if (rest.starts_with(">")) {
      rel = Rel::Gt;
      i += 1;
    } else {
      guard_error(text, i, "expected one of < <= == > >=");
    }
    skip();
    std::size_t num = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (num == i) guard_error(text, num, "expected a non-negative integer constant");
    if (i - num > 9) guard_error(text, num, "constant too large");
    out.atoms.push_back({c, rel, std::stoll(std::string(text.substr(num, i - num)))});
    skip();
    if (i == text.size()) return out;
    if (text.substr(i).starts_with("&&")) {
      i += 2;
      continue;
    }
    guard_error(text, i, "expected '&&'");
  }
}

Model parse_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!root.is_object()) throw InputError("model must be a JSON object");
  std::string type = str(root, "type", "model");
  try {
    if (type == "fa") return Model{parse_fa(root)};
    if (type == "ta") return Model{parse_ta(root)};
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid model: ") + e.what());
  }
  throw InputError("model type must be \"fa\" or \"ta\"");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Model load_model(const std::string& path) { return parse_model(read_file(path)); }

json model_to_json(const FiniteAutomaton& a) {
  json j;
  j["type"] = "fa";
  common_json(a, j);
  json edges = json::array();
  for (const auto& e : a.edges())
    edges.push_back({{"src", a.location_name(e.src)}, {"event", a.alphabet().name(e.label)}, {"dst", a.location_name(e.dst)}});
  j["edges"] = edges;
  return j;
}

json model_to_json(const TimedAutomaton& a) {
  json j;
  j["type"] = "ta";
  common_json(a, j);
  j["clocks"] = a.clock_names();
  json inv = json::object();
  for (int l = 0; l < a.num_locations(); ++l)
    if (!a.invariant(l).is_true()) inv[a.location_name(l)] = to_string(a.invariant(l), a.clock_names());
  j["invariants"] = inv;
  json edges = json::array();
  for (const auto& e : a.edges()) {
    json resets = json::array();
    for (int c : e.resets) resets.push_back(a.clock_name(c));
    edges.push_back({{"src", a.location_name(e.src)},
                     {"event", a.alphabet().name(e.label)},
                     {"dst", a.location_name(e.dst)},
                     {"guard", to_string(e.guard, a.clock_names())},
                     {"resets", resets}});
  }
  j["edges"] = edges;
  return j;
}

std::string to_dot(const FiniteAutomaton& a, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << escape(name) << "\" {\n";
  for (int l = 0; l < a.num_locations(); ++l) {
    out << "  n" << l << " [label=\"" << escape(a.location_name(l)) << "\"";
    if (a.is_final(l)) out << ", peripheries=2";
    if (l == a.initial()) out << ", style=bold";
    out << "];\n";
  }
  for (const auto& e : a.edges())
    out << "  n" << e.src << " -> n" << e.dst << " [label=\"" << escape(a.alphabet().name(e.label)) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const TimedAutomaton& a, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << escape(name) << "\" {\n";
  for (int l = 0; l < a.num_locations(); ++l) {
    out << "  n" << l << " [label=\"" << escape(a.location_name(l));
    if (!a.invariant(l).is_true()) out << "\\n" << escape(to_string(a.invariant(l), a.clock_names()));
    out << "\"";
    if (a.is_repeated(l)) out << ", peripheries=2";
    if (l == a.initial()) out << ", style=bold";
    out << "];\n";
  }
  for (const auto& e : a.edges()) {
    out << "  n" << e.src << " -> n" << e.dst << " [label=\"";
    if (!e.guard.is_true()) out << escape(to_string(e.guard, a.clock_names())) << ", ";
    out << escape(a.alphabet().name(e.label));
    if (!e.resets.empty()) {
      out << ", {";
      for (std::size_t i = 0; i < e.resets.size(); ++i) out << (i ? "," : "") << escape(a.clock_name(e.resets[i]));
      out << "}";
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tapred
