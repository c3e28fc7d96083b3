#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rglab {

// Expression templates off: values are small and plain temporaries keep
// ternaries, std::max and auto deduction working.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

/// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {
inline BigInt parse_int(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw std::invalid_argument("malformed integer");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw std::invalid_argument("malformed integer");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}
}  // namespace detail

/// Accepts "p", "p/q" (q != 0), surrounding whitespace ignored.
inline Rational parse_rational(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_int(s));
  const BigInt num = detail::parse_int(s.substr(0, slash));
  const BigInt den = detail::parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(num, den);
}

}  // namespace rglab
