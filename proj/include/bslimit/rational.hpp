#pragma once

#include <cctype>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "bslimit/error.hpp"

namespace bslimit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Always "num/den", so reports have one shape regardless of value.
inline std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + s + "'");
    return Rational(BigInt(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw ValidationError("malformed rational '" + s + "'");
  }
}

/// Exact value of a decimal literal such as "0.05", "1e-3" or "2.5E+1";
/// "a/b" is accepted too.
inline Rational parse_decimal(const std::string& s) {
  if (s.find('/') != std::string::npos) return parse_rational(s);
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool dot = false, any = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (dot) throw ValidationError("malformed number '" + s + "'");
      dot = true;
    } else {
      digits += s[i];
      any = true;
      if (dot) ++frac;
    }
  }
  if (!any) throw ValidationError("malformed number '" + s + "'");
  long exp = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    try {
      std::size_t used = 0;
      exp = std::stol(s.substr(i + 1), &used);
      if (used != s.size() - i - 1) throw ValidationError("");
    } catch (const std::exception&) {
      throw ValidationError("malformed exponent in '" + s + "'");
    }
    i = s.size();
  }
  if (i != s.size()) throw ValidationError("malformed number '" + s + "'");
  exp -= frac;
  if (exp > 4000 || exp < -4000) throw ValidationError("exponent out of range in '" + s + "'");
  Rational q{BigInt(digits)};
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp < 0 ? -exp : exp));
  if (exp < 0)
    q /= scale;
  else
    q *= scale;
  return neg ? Rational(-q) : q;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace bslimit
