#pragma once

#include "tapred/clock_constraint.hpp"
#include "tapred/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tapred {

/// Upper bound on a clock difference: value with strictness, or +infinity.
struct Bound {
  Rational value{0};
  bool strict = false;
  bool infinite = false;

  static Bound le(Rational v) { return {v, false, false}; }
  static Bound lt(Rational v) { return {v, true, false}; }
  static Bound inf() { return {Rational(0), false, true}; }

  friend bool operator==(const Bound&, const Bound&) = default;
};

bool operator<(const Bound& a, const Bound& b);
inline bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
Bound operator+(const Bound& a, const Bound& b);

/// Difference-bound matrix over clocks 1..n with reference clock 0.
/// Entry (i, j) bounds x_i - x_j. Kept canonical after every operation.
class Zone {
 public:
  Zone() = default;

  /// All valuations with non-negative clocks.
  static Zone universe(int clocks);
  /// The single valuation with every clock at zero.
  static Zone zero(int clocks);
  static Zone point(const std::vector<Rational>& valuation);

  int clocks() const { return dim_ - 1; }
  bool empty() const { return empty_; }

  const Bound& at(int i, int j) const { return m_[static_cast<std::size_t>(i * dim_ + j)]; }

  /// Adds x_i - x_j (bound). Clock indices are 1-based, 0 is the reference.
  Zone& constrain(int i, int j, const Bound& b);
  /// Clock indices in atoms are 0-based model clocks (shifted by one here).
  Zone& constrain(const ClockAtom& atom);
  Zone& constrain(const ClockConstraint& c);
  Zone& intersect(const Zone& other);

  Zone& up();
  Zone& down();
  /// 0-based clock.
  Zone& reset(int clock, const Rational& value = Rational(0));
  Zone& free(int clock);
  /// Classic maximal-constant extrapolation; a negative entry leaves the
  /// clock's bounds untouched.
  Zone& extrapolate(const std::vector<long long>& max_constants);

  bool includes(const Zone& other) const;
  bool intersects(const Zone& other) const;
  bool contains(const std::vector<Rational>& valuation) const;

  /// Lower/upper bounds of one 0-based clock.
  Bound lower(int clock) const { return at(0, clock + 1); }
  Bound upper(int clock) const { return at(clock + 1, 0); }

  /// A concrete valuation inside the zone, chosen clock by clock:
  /// the lower bound if closed, else the interval midpoint, else lower+1.
  std::optional<std::vector<Rational>> pick() const;

  std::string to_string(const std::vector<std::string>& clock_names) const;

  friend bool operator==(const Zone&, const Zone&) = default;

 private:
  explicit Zone(int clocks);
  Bound& ref(int i, int j) { return m_[static_cast<std::size_t>(i * dim_ + j)]; }
  void close();
  void close_after(int i, int j);

  int dim_ = 1;
  bool empty_ = false;
  std::vector<Bound> m_{Bound::le(Rational(0))};
};

}  // namespace tapred
