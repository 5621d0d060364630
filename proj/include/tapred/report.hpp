#pragma once

#include "tapred/fa_predict.hpp"
#include "tapred/predictor.hpp"
#include "tapred/ta_predict.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace tapred {

/// Version of every JSON document the CLI writes.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const EventAlphabet& alphabet, const UntimedWord& w);
nlohmann::json to_json(const TimedAutomaton& a, const TimedRun& run);
nlohmann::json to_json(const EventAlphabet& alphabet, const TimedWord& w);

nlohmann::json witness_json(const FiniteAutomaton& a, int k, const FaWitness& w);
/// `n` is the model the witness runs on (see TaWitness).
nlohmann::json witness_json(const NormalizedTA& n, const TaVerdict& v, bool divergence);

/// Inverse of witness_json. Throws InputError on malformed documents.
struct ParsedFaWitness {
  int bound = 0;
  FaWitness witness;
};
ParsedFaWitness parse_fa_witness(const FiniteAutomaton& a, const nlohmann::json& j);

struct ParsedTaWitness {
  long long bound = 0;
  std::optional<SamplingSpec> sampling;
  bool divergence = true;
  TaWitness witness;
};
ParsedTaWitness parse_ta_witness(const TimedAutomaton& normalized, const nlohmann::json& j);

nlohmann::json verdict_json(const FiniteAutomaton& a, int k, const FaVerdict& v);
nlohmann::json verdict_json(const NormalizedTA& n, const TaVerdict& v, bool divergence);
nlohmann::json bound_json(const AnticipationBound& b);

/// One line of a predictor trace file: {"delay": "p/q" | number, "event": "a"}.
TimedWord parse_trace(const EventAlphabet& alphabet, const std::string& jsonl);

}  // namespace tapred
