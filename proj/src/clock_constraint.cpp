#include "tapred/clock_constraint.hpp"

namespace tapred {

bool ClockAtom::holds(const Rational& value) const {
  Rational c(constant);
  switch (rel) {
    case Rel::Lt: return value < c;
    case Rel::Le: return value <= c;
    case Rel::Eq: return value == c;
    case Rel::Ge: return value >= c;
    case Rel::Gt: return value > c;
  }
  return false;
}

bool ClockConstraint::holds(const std::vector<Rational>& valuation) const {
  for (const auto& a : atoms)
    if (!a.holds(valuation.at(static_cast<std::size_t>(a.clock)))) return false;
  return true;
}

bool ClockConstraint::mentions(int clock) const {
  for (const auto& a : atoms)
    if (a.clock == clock) return true;
  return false;
}

bool ClockConstraint::bounds_above(int clock) const {
  for (const auto& a : atoms)
    if (a.clock == clock && (a.rel == Rel::Lt || a.rel == Rel::Le || a.rel == Rel::Eq)) return true;
  return false;
}

bool ClockConstraint::has_upper_bound() const {
  for (const auto& a : atoms)
    if (a.rel == Rel::Lt || a.rel == Rel::Le || a.rel == Rel::Eq) return true;
  return false;
}

ClockConstraint ClockConstraint::operator&&(const ClockConstraint& other) const {
  ClockConstraint out = *this;
  for (const auto& a : other.atoms) {
    bool dup = false;
    for (const auto& b : out.atoms) dup = dup || a == b;
    if (!dup) out.atoms.push_back(a);
  }
  return out;
}

ClockConstraint ClockConstraint::scaled(long long factor) const {
  ClockConstraint out = *this;
  for (auto& a : out.atoms) a.constant *= factor;
  return out;
}

ClockConstraint ClockConstraint::shifted_clocks(int offset) const {
  ClockConstraint out = *this;
  for (auto& a : out.atoms) a.clock += offset;
  return out;
}

std::string rel_symbol(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "==";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

std::string to_string(const ClockConstraint& c, const std::vector<std::string>& clock_names) {
  if (c.is_true()) return "true";
  std::string out;
  for (const auto& a : c.atoms) {
    if (!out.empty()) out += " && ";
    out += clock_names.at(static_cast<std::size_t>(a.clock)) + rel_symbol(a.rel) + std::to_string(a.constant);
  }
  return out;
}

}  // namespace tapred
