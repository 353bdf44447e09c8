#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace moserlab {

/// Exact rational number, always reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den = 1) {
    // Boost rejects negative denominators in the two-argument constructor.
    if (den < 0) return Rational(BigInt(-BigInt(num)), BigInt(-BigInt(den)));
    return Rational(BigInt(num), BigInt(den));
}

/// Parses "p", "-p", "p/q" or a finite decimal "1.25" exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact value of a finite double.
Rational from_double_exact(double x);

Rational pow_int(const Rational& base, int exponent);

inline bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

}  // namespace moserlab
