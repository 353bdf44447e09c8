#include "moserlab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace moserlab {

namespace {

BigInt parse_integer(std::string_view digits) {
    if (digits.empty()) throw std::invalid_argument("empty integer literal");
    BigInt value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') {
            throw std::invalid_argument("bad digit in rational literal: " + std::string(digits));
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        value = Rational(parse_integer(text.substr(0, slash)), den);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
        BigInt num = (whole.empty() ? BigInt(0) : parse_integer(whole)) * scale +
                     (frac.empty() ? BigInt(0) : parse_integer(frac));
        value = Rational(num, scale);
    } else {
        value = Rational(parse_integer(text));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational from_double_exact(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
    int exponent = 0;
    double mantissa = std::frexp(x, &exponent);
    // 53-bit mantissa scaled to an integer.
    auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
    exponent -= 53;
    Rational value{BigInt(scaled)};
    if (exponent >= 0) {
        value *= Rational(boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(exponent)));
    } else {
        value /= Rational(boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(-exponent)));
    }
    return value;
}

Rational pow_int(const Rational& base, int exponent) {
    if (exponent < 0) {
        if (base == 0) throw std::domain_error("zero to a negative power");
        return Rational(1) / pow_int(base, -exponent);
    }
    Rational result = 1;
    Rational factor = base;
    auto e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1U) result *= factor;
        e >>= 1U;
        if (e != 0) factor *= factor;
    }
    return result;
}

}  // namespace moserlab
