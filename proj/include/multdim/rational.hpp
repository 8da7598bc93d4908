#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace multdim {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic (canonical form: positive denominator, reduced).
// Backed by boost::multiprecision::cpp_rational.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Serializes as "num/den" (decimal strings), e.g. "-3/7".
std::string rational_to_string(const Rational& r);

// Parses "num/den" or a plain integer string. Throws std::invalid_argument.
Rational rational_from_string(const std::string& s);

// Fractional part in [0,1).
Rational rational_mod1(const Rational& x);

// min over integers m of |x - m|, exact, in [0, 1/2].
Rational nearest_integer_distance(const Rational& x);

// Floating-point counterpart; total over finite doubles.
double nearest_integer_distance(double x);

}  // namespace multdim
