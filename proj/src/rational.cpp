#include "tapred/rational.hpp"

#include "tapred/errors.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace tapred {

namespace {

long long parse_integer(std::string_view text, std::string_view whole) {
  long long value = 0;
  if (text.empty()) throw InputError("invalid rational '" + std::string(whole) + "'");
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InputError("invalid rational '" + std::string(whole) + "'");
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    long long num = parse_integer(text.substr(0, slash), text);
    long long den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);
    if (frac_part.size() > 15) throw InputError("too many decimals in '" + std::string(text) + "'");
    long long whole = int_part.empty() ? 0 : parse_integer(int_part, text);
    long long frac = frac_part.empty() ? 0 : parse_integer(frac_part, text);
    long long scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rational r = Rational(whole) + Rational(frac, scale);
    return negative ? -r : r;
  }
  return Rational(parse_integer(text, text));
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite number");
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::fixed);
  if (ec != std::errc()) throw InputError("cannot convert number");
  return parse_rational(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace tapred
