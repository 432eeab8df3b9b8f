#ifndef FLOWCAT_NUMERIC_HPP
#define FLOWCAT_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace flowcat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Decimal integer or "a/b".
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

BigInt parse_bigint(const std::string& text);
std::string format_bigint(const BigInt& z);

}  // namespace flowcat

#endif
