#pragma once

#include "moserlab/rational.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace moserlab::poly {

/// Dense univariate polynomial with exact rational coefficients, lowest degree first.
/// Trailing zero coefficients are always trimmed, so the zero polynomial is empty.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Rational> coeffs);
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);
    /// The monomial x.
    static Poly x();

    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    Poly derivative() const;
    /// p(x0 + v) as a polynomial in v.
    Poly shift(const Rational& x0) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& k);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend Poly operator*(Poly a, const Rational& k) { return a *= k; }
    friend Poly operator*(const Rational& k, Poly a) { return a *= k; }
    Poly operator-() const;
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Human-readable form in the named variable, e.g. "2*t^2 - 1/3*t + 5".
    std::string str(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

Poly pow(const Poly& p, unsigned n);

/// Closed rational interval [lo, hi].
struct Interval {
    Rational lo;
    Rational hi;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);

/// Exact enclosure of p over x (interval Horner scheme).
Interval enclose(const Poly& p, const Interval& x);

}  // namespace moserlab::poly
