#ifndef HAAR_RATIONAL_HPP
#define HAAR_RATIONAL_HPP

// Exact rational arithmetic. Every weight, measure value and function value in
// the library is a Rational; nothing is ever rounded.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace haar
{

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Canonical text form: "p" for integers, "p/q" otherwise, always reduced with
/// positive denominator.
inline std::string to_string(const Rational &q)
{
  const Integer &num = boost::multiprecision::numerator(q);
  const Integer &den = boost::multiprecision::denominator(q);
  if (den == 1)
    return num.str();
  return num.str() + "/" + den.str();
}

namespace detail
{

inline bool is_integer_literal(std::string_view s)
{
  if (s.empty())
    return false;
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (i == s.size())
    return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  return true;
}

} // namespace detail

/// Parses "p" or "p/q" (optional sign on p, q > 0 after sign handling).
/// Decimal points and exponents are rejected.
inline Rational parse_rational(std::string_view text)
{
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den))
    throw std::invalid_argument("malformed rational \"" + std::string(text) + "\"");
  Integer p(std::string(num.front() == '+' ? num.substr(1) : num));
  Integer q(std::string(den.front() == '+' ? den.substr(1) : den));
  if (q == 0)
    throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
  return Rational(p, q);
}

} // namespace haar

#endif // HAAR_RATIONAL_HPP
