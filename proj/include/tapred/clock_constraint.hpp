#pragma once

#include "tapred/rational.hpp"

#include <string>
#include <vector>

namespace tapred {

enum class Rel { Lt, Le, Eq, Ge, Gt };

struct ClockAtom {
  int clock = 0;
  Rel rel = Rel::Le;
  long long constant = 0;

  bool holds(const Rational& value) const;
  friend bool operator==(const ClockAtom&, const ClockAtom&) = default;
};

/// Conjunction of atoms; the empty conjunction is `true`.
struct ClockConstraint {
  std::vector<ClockAtom> atoms;

  bool is_true() const { return atoms.empty(); }
  bool holds(const std::vector<Rational>& valuation) const;
  bool mentions(int clock) const;
  /// Some atom bounds `clock` from above (< or <= or ==).
  bool bounds_above(int clock) const;
  bool has_upper_bound() const;

  ClockConstraint operator&&(const ClockConstraint& other) const;
  ClockConstraint scaled(long long factor) const;
  ClockConstraint shifted_clocks(int offset) const;

  friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;
};

std::string rel_symbol(Rel r);

/// Renders with clock names, "true" for the empty conjunction.
std::string to_string(const ClockConstraint& c, const std::vector<std::string>& clock_names);

}  // namespace tapred
