#ifndef HSBLAB_SCALAR_HPP
#define HSBLAB_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hsblab {

using Rational = boost::multiprecision::cpp_rational;

/* Numeric policy for the two scalar modes.  Exact mode compares against
   zero; floating mode uses the pinned tolerances below everywhere, so the
   whole solver stack shares one notion of "negligible". */
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double feas_tol() { return 1e-9; }
  static double prune_tol() { return 1e-12; }
  static double to_double(double x) { return x; }
  static const char* mode_name() { return "float"; }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static Rational feas_tol() { return Rational(0); }
  static Rational prune_tol() { return Rational(0); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static const char* mode_name() { return "rational"; }
};

inline double num_abs(double x) { return std::fabs(x); }
inline Rational num_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

namespace detail {
/* Strict base-10 parse of [+-]?digits.  Leading zeros are stripped first so
   the boost constructor cannot reinterpret them as an octal prefix. */
inline boost::multiprecision::cpp_int parse_decimal_int(const std::string& s) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = (s[pos++] == '-');
  if (pos >= s.size())
    throw std::invalid_argument("missing digits in integer literal '" + s + "'");
  for (std::size_t k = pos; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9')
      throw std::invalid_argument("bad digit in integer literal '" + s + "'");
  while (pos + 1 < s.size() && s[pos] == '0') ++pos;
  boost::multiprecision::cpp_int v(s.substr(pos));
  return neg ? boost::multiprecision::cpp_int(-v) : v;
}
}  // namespace detail

/* Accepts "p", "p/q", and plain decimals like "1.5" or "-0.25". */
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    if (slash == 0 || slash + 1 >= s.size() ||
        s.find('/', slash + 1) != std::string::npos)
      throw std::invalid_argument("cannot parse rational literal '" + s + "'");
    auto num = detail::parse_decimal_int(s.substr(0, slash));
    auto den = detail::parse_decimal_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  std::size_t dot = s.find('.');
  if (dot == std::string::npos) return Rational(detail::parse_decimal_int(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  if (frac_len == 0 && dot == 0)
    throw std::invalid_argument("cannot parse rational literal '" + s + "'");
  if (frac_len == 0) digits += "0";
  boost::multiprecision::cpp_int num = detail::parse_decimal_int(digits);
  boost::multiprecision::cpp_int den(1);
  for (std::size_t i = 0; i < (frac_len == 0 ? 1 : frac_len); ++i) den *= 10;
  return Rational(num, den);
}

inline std::string format_rational(const Rational& x) {
  std::string out = numerator(x).str();
  if (denominator(x) != 1) out += "/" + denominator(x).str();
  return out;
}

/* Literal constructor used by generic code: from_fraction<T>(3, 2). */
template <class T>
T from_fraction(long long num, long long den = 1);

template <>
inline double from_fraction<double>(long long num, long long den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

template <>
inline Rational from_fraction<Rational>(long long num, long long den) {
  return Rational(num, den);
}

}  // namespace hsblab

#endif
