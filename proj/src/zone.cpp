#include "tapred/zone.hpp"

namespace tapred {

bool operator<(const Bound& a, const Bound& b) {
  if (a.infinite) return false;
  if (b.infinite) return true;
  if (a.value != b.value) return a.value < b.value;
  return a.strict && !b.strict;
}

Bound operator+(const Bound& a, const Bound& b) {
  if (a.infinite || b.infinite) return Bound::inf();
  return {a.value + b.value, a.strict || b.strict, false};
}

Zone::Zone(int clocks) : dim_(clocks + 1), m_(static_cast<std::size_t>(dim_ * dim_), Bound::inf()) {
  for (int i = 0; i < dim_; ++i) ref(i, i) = Bound::le(Rational(0));
}

Zone Zone::universe(int clocks) {
  Zone z(clocks);
  for (int j = 1; j < z.dim_; ++j) z.ref(0, j) = Bound::le(Rational(0));
  return z;
}

Zone Zone::zero(int clocks) {
  Zone z(clocks);
  for (auto& b : z.m_) b = Bound::le(Rational(0));
  return z;
}

Zone Zone::point(const std::vector<Rational>& v) {
  Zone z(static_cast<int>(v.size()));
  for (int i = 0; i < z.dim_; ++i) {
    for (int j = 0; j < z.dim_; ++j) {
      Rational vi = i == 0 ? Rational(0) : v[static_cast<std::size_t>(i - 1)];
      Rational vj = j == 0 ? Rational(0) : v[static_cast<std::size_t>(j - 1)];
      z.ref(i, j) = Bound::le(vi - vj);
    }
  }
  for (const auto& x : v)
    if (x < 0) z.empty_ = true;
  return z;
}

void Zone::close() {
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i) {
      if (at(i, k).infinite) continue;
      for (int j = 0; j < dim_; ++j) {
        Bound via = at(i, k) + at(k, j);
        if (via < at(i, j)) ref(i, j) = via;
      }
    }
  for (int i = 0; i < dim_; ++i)
    if (at(i, i) < Bound::le(Rational(0))) empty_ = true;
}

void Zone::close_after(int i, int j) {
  // Only paths through the tightened entry (i, j) can improve.
  for (int k = 0; k < dim_; ++k) {
    Bound ki = at(k, i);
    if (ki.infinite) continue;
    Bound kij = ki + at(i, j);
    for (int l = 0; l < dim_; ++l) {
      Bound via = kij + at(j, l);
      if (via < at(k, l)) ref(k, l) = via;
    }
  }
  for (int k = 0; k < dim_; ++k)
    if (at(k, k) < Bound::le(Rational(0))) empty_ = true;
}

Zone& Zone::constrain(int i, int j, const Bound& b) {
  if (empty_) return *this;
  if (b < at(i, j)) {
    ref(i, j) = b;
    if ((b + at(j, i)) < Bound::le(Rational(0))) {
      empty_ = true;
      return *this;
    }
    close_after(i, j);
  }
  return *this;
}

Zone& Zone::constrain(const ClockAtom& a) {
  int x = a.clock + 1;
  Rational c(a.constant);
  switch (a.rel) {
    case Rel::Lt: return constrain(x, 0, Bound::lt(c));
    case Rel::Le: return constrain(x, 0, Bound::le(c));
    case Rel::Eq:
      constrain(x, 0, Bound::le(c));
      return constrain(0, x, Bound::le(-c));
    case Rel::Ge: return constrain(0, x, Bound::le(-c));
    case Rel::Gt: return constrain(0, x, Bound::lt(-c));
  }
  return *this;
}

Zone& Zone::constrain(const ClockConstraint& c) {
  for (const auto& a : c.atoms) constrain(a);
  return *this;
}

Zone& Zone::intersect(const Zone& other) {
  if (other.empty_) empty_ = true;
  if (empty_) return *this;
  bool changed = false;
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (other.m_[k] < m_[k]) {
      m_[k] = other.m_[k];
      changed = true;
    }
  }
  if (changed) close();
  return *this;
}

Zone& Zone::up() {
  if (empty_) return *this;
  for (int i = 1; i < dim_; ++i) ref(i, 0) = Bound::inf();
  return *this;
}

Zone& Zone::down() {
  if (empty_) return *this;
  for (int j = 1; j < dim_; ++j) {
    ref(0, j) = Bound::le(Rational(0));
    for (int i = 1; i < dim_; ++i)
      if (at(i, j) < at(0, j)) ref(0, j) = at(i, j);
  }
  close();
  return *this;
}

Zone& Zone::reset(int clock, const Rational& value) {
  if (empty_) return *this;
  int c = clock + 1;
  for (int j = 0; j < dim_; ++j) {
    if (j == c) continue;
    ref(c, j) = Bound::le(value) + at(0, j);
    ref(j, c) = at(j, 0) + Bound::le(-value);
  }
  ref(c, c) = Bound::le(Rational(0));
  return *this;
}

Zone& Zone::free(int clock) {
  if (empty_) return *this;
  int c = clock + 1;
  for (int j = 0; j < dim_; ++j) {
    if (j == c) continue;
    ref(c, j) = Bound::inf();
    ref(j, c) = at(j, 0);
  }
  ref(0, c) = Bound::le(Rational(0));
  return *this;
}

Zone& Zone::extrapolate(const std::vector<long long>& max_constants) {
  if (empty_) return *this;
  auto limit = [&](int i) -> long long { return i == 0 ? 0 : max_constants[static_cast<std::size_t>(i - 1)]; };
  bool changed = false;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      if (i == j) continue;
      long long mi = limit(i), mj = limit(j);
      Bound& b = ref(i, j);
      if (b.infinite) continue;
      if (mi >= 0 && Bound::le(Rational(mi)) < b) {
        b = Bound::inf();
        changed = true;
      } else if (mj >= 0 && b < Bound::lt(Rational(-mj))) {
        b = Bound::lt(Rational(-mj));
        changed = true;
      }
    }
  }
  if (changed) close();
  return *this;
}

bool Zone::includes(const Zone& other) const {
  if (other.empty_) return true;
  if (empty_) return false;
  for (std::size_t k = 0; k < m_.size(); ++k)
    if (m_[k] < other.m_[k]) return false;
  return true;
}

bool Zone::intersects(const Zone& other) const {
  Zone z = *this;
  z.intersect(other);
  return !z.empty();
}

bool Zone::contains(const std::vector<Rational>& v) const {
  if (empty_) return false;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      if (i == j || at(i, j).infinite) continue;
      Rational vi = i == 0 ? Rational(0) : v[static_cast<std::size_t>(i - 1)];
      Rational vj = j == 0 ? Rational(0) : v[static_cast<std::size_t>(j - 1)];
      Rational d = vi - vj;
      const Bound& b = at(i, j);
      if (b.strict ? !(d < b.value) : !(d <= b.value)) return false;
    }
  }
  return true;
}

std::optional<std::vector<Rational>> Zone::pick() const {
  if (empty_) return std::nullopt;
  Zone z = *this;
  std::vector<Rational> v(static_cast<std::size_t>(clocks()));
  for (int c = 0; c < clocks(); ++c) {
    Bound lo = z.lower(c), hi = z.upper(c);
    Rational low = -lo.value;
    Rational value;
    if (!lo.strict) {
      value = low;
    } else if (!hi.infinite) {
      value = (low + hi.value) / 2;
    } else {
      value = low + 1;
    }
    v[static_cast<std::size_t>(c)] = value;
    z.constrain(c + 1, 0, Bound::le(value));
    z.constrain(0, c + 1, Bound::le(-value));
    if (z.empty()) return std::nullopt;
  }
  return v;
}

std::string Zone::to_string(const std::vector<std::string>& names) const {
  if (empty_) return "false";
  auto name = [&](int i) { return names.at(static_cast<std::size_t>(i - 1)); };
  std::string out;
  auto add = [&](const std::string& s) { out += (out.empty() ? "" : " && ") + s; };
  for (int i = 1; i < dim_; ++i) {
    const Bound& lo = at(0, i);
    const Bound& hi = at(i, 0);
    if (!hi.infinite && !lo.strict && !hi.strict && -lo.value == hi.value) {
      add(name(i) + "==" + tapred::to_string(hi.value));
      continue;
    }
    if (lo.value != Rational(0) || lo.strict) add(name(i) + (lo.strict ? ">" : ">=") + tapred::to_string(-lo.value));
    if (!hi.infinite) add(name(i) + (hi.strict ? "<" : "<=") + tapred::to_string(hi.value));
  }
  for (int i = 1; i < dim_; ++i)
    for (int j = 1; j < dim_; ++j) {
      if (i == j || at(i, j).infinite) continue;
      // Skip differences implied by the single-clock bounds.
      if (!at(i, 0).infinite && !(at(i, j) < at(i, 0) + at(0, j))) continue;
      add(name(i) + "-" + name(j) + (at(i, j).strict ? "<" : "<=") + tapred::to_string(at(i, j).value));
    }
  return out.empty() ? "true" : out;
}

}  // namespace tapred
