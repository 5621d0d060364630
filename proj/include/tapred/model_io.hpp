#pragma once

#include "tapred/finite_automaton.hpp"
#include "tapred/timed_automaton.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace tapred {

struct Model {
  std::variant<FiniteAutomaton, TimedAutomaton> automaton;

  bool timed() const { return std::holds_alternative<TimedAutomaton>(automaton); }
  const FiniteAutomaton& fa() const { return std::get<FiniteAutomaton>(automaton); }
  const TimedAutomaton& ta() const { return std::get<TimedAutomaton>(automaton); }
};

/// Parses a guard such as "x>=2 && y<1" or "true". `clock` maps names to
/// indices and may declare new clocks; it returns -1 for unknown names.
ClockConstraint parse_guard(std::string_view text, const std::function<int(const std::string&)>& clock);

/// Throws InputError with line/column for malformed JSON and with the
/// offending field for semantic problems.
Model parse_model(std::string_view text);
Model load_model(const std::string& path);

nlohmann::json model_to_json(const FiniteAutomaton& a);
nlohmann::json model_to_json(const TimedAutomaton& a);

std::string to_dot(const FiniteAutomaton& a, const std::string& name = "fa");
std::string to_dot(const TimedAutomaton& a, const std::string& name = "ta");

std::string read_file(const std::string& path);

}  // namespace tapred
