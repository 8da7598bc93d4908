#include "multdim/rational.hpp"

#include <cmath>

namespace multdim {

std::string rational_to_string(const Rational& r) {
  return rat_num(r).str() + "/" + rat_den(r).str();
}

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("nonpositive denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

Rational rational_mod1(const Rational& x) {
  BigInt n = rat_num(x), d = rat_den(x);
  BigInt q = n / d;           // truncates toward zero
  BigInt rem = n - q * d;
  if (rem < 0) rem += d;
  return Rational(rem, d);
}

Rational nearest_integer_distance(const Rational& x) {
  Rational f = rational_mod1(x);
  Rational other = 1 - f;
  return f <= other ? f : other;
}

double nearest_integer_distance(double x) {
  double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

}  // namespace multdim
