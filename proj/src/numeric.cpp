#include "flowcat/numeric.hpp"

#include "flowcat/error.hpp"

#include <cctype>

namespace flowcat {

namespace {

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

BigInt parse_bigint(const std::string& text) {
  if (!is_integer_literal(text)) throw Error("not an integer: '" + text + "'");
  std::string s = text[0] == '+' ? text.substr(1) : text;
  return BigInt(s);
}

std::string format_bigint(const BigInt& z) { return z.str(); }

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  std::string den_text = text.substr(slash + 1);
  if (!den_text.empty() && den_text[0] == '-') throw Error("negative denominator: '" + text + "'");
  BigInt den = parse_bigint(den_text);
  if (den == 0) throw Error("zero denominator: '" + text + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace flowcat
