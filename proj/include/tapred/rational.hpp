#pragma once

#include <boost/rational.hpp>

#include <string>
#include <string_view>

namespace tapred {

using Rational = boost::rational<long long>;

/// "p/q", "p", or a decimal literal such as "2.4"; throws InputError otherwise.
Rational parse_rational(std::string_view text);

/// Exact conversion of a double via its shortest round-trip decimal form.
Rational rational_from_double(double value);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& r);

inline Rational floor_div(const Rational& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return Rational(q);
}

}  // namespace tapred
