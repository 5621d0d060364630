#pragma once

#include "tapred/finite_automaton.hpp"
#include "tapred/model_io.hpp"
#include "tapred/timed_automaton.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace test {

inline std::string model_path(const std::string& name) { return std::string(TAPRED_MODELS_DIR) + "/" + name; }

inline tapred::FiniteAutomaton untimed_G() { return tapred::load_model(model_path("G_untimed.json")).fa(); }
inline tapred::TimedAutomaton timed_G() { return tapred::load_model(model_path("G.json")).ta(); }
inline tapred::TimedAutomaton model_B() { return tapred::load_model(model_path("B.json")).ta(); }

/// Builds an FA over observable {a,b,c}, unobservable {u,f}, fault f from
/// (src, event, dst) triples; "eps" is the silent label.
inline tapred::FiniteAutomaton fa(int locations, const std::vector<std::tuple<int, std::string, int>>& edges,
                                  std::vector<std::string> observable = {"a", "b", "c"},
                                  std::vector<std::string> unobservable = {"u", "f"}) {
  tapred::FiniteAutomaton a(tapred::EventAlphabet(observable, unobservable, "f"));
  for (int i = 0; i < locations; ++i) a.add_location("q" + std::to_string(i));
  for (const auto& [s, e, d] : edges) a.add_edge(s, a.alphabet().label(e), d);
  for (int i = 0; i < locations; ++i) {
    a.set_final(i);
    a.set_repeated(i);
  }
  return a;
}

inline tapred::Model parse(const std::string& text) { return tapred::parse_model(text); }

template <typename Set>
std::vector<std::string> names(const tapred::FiniteAutomaton& a, const Set& locations) {
  std::vector<std::string> out;
  for (int l : locations) out.push_back(a.location_name(l));
  return out;
}

inline std::vector<std::string> names_of(const tapred::FiniteAutomaton& a, const std::vector<bool>& set) {
  std::vector<std::string> out;
  for (int l = 0; l < a.num_locations(); ++l)
    if (set[static_cast<std::size_t>(l)]) out.push_back(a.location_name(l));
  return out;
}

}  // namespace test
