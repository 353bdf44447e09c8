#pragma once

#include "moserlab/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moserlab::poly {

/// Identifies one term c(s)*sign(t)^sign_power*|t|^(a*s + q).
struct TermKey {
    int sign_power = 0;  // 0 or 1
    Rational a;
    Rational q;

    friend bool operator==(const TermKey& x, const TermKey& y) {
        return x.sign_power == y.sign_power && x.a == y.a && x.q == y.q;
    }
    friend bool operator<(const TermKey& x, const TermKey& y) {
        if (x.sign_power != y.sign_power) return x.sign_power < y.sign_power;
        if (x.a != y.a) return x.a < y.a;
        return x.q < y.q;
    }
};

/// Exact expression in t with exponents affine in s.
///
/// Canonical by construction: terms are keyed uniquely and zero coefficients are
/// erased after every operation. t^n is stored as sign(t)^(n mod 2)*|t|^n.
class Expr {
public:
    using Terms = std::map<TermKey, Poly>;

    Expr() = default;
    static Expr constant(const Rational& c);
    static Expr coefficient(const Poly& c_of_s);
    /// The parameter s as a t-independent term.
    static Expr s();
    static Expr t();
    static Expr abs_t();
    static Expr sign_t();
    /// |t|^(a*s + q).
    static Expr abs_pow(const Rational& a, const Rational& q);
    static Expr term(const TermKey& key, const Poly& coeff);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(Expr a, const Expr& b) { return a *= b; }
    Expr operator-() const;
    friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

    /// Integer power; a negative n requires a single term with constant coefficient.
    Expr pow(int n) const;

    /// Floating-point evaluation; sign(0) is taken as 0.
    double evaluate(double s, double t) const;

    std::string str() const;

private:
    void add_term(const TermKey& key, const Poly& coeff);
    Terms terms_;
};

/// Canonical form. Expressions are canonical by construction, so this is the identity
/// map; it exists as the named entry point for the expand/collect operation.
Expr expand_collect(const Expr& e);

/// Coefficients of e as an ordinary polynomial in t, lowest degree first.
/// Empty optional when e has a non-monomial term (|t|, s-dependent exponent, ...).
std::optional<std::vector<Poly>> coefficients_in_t(const Expr& e);

/// As coefficients_in_t but valid on t >= 0, where |t| = t and sign(t) = 1.
std::optional<std::vector<Poly>> coefficients_in_t_nonneg(const Expr& e);

/// Coefficients of e collected by powers of s, lowest first.
std::vector<Expr> coefficients_in_s(const Expr& e);

/// Univariate polynomial in t (coefficients free of s); optional is empty otherwise.
std::optional<Poly> univariate(const Expr& e, bool nonneg_half_line);

/// d/dt, term-wise, valid for t != 0.
Expr differentiate(const Expr& e);

/// d/ds; requires every exponent to be free of s.
Expr differentiate_s(const Expr& e);

/// Restriction to t > 0: sign(t) -> 1.
Expr on_nonneg(const Expr& e);

/// Value at t = 1 as a polynomial in s.
Poly at_one(const Expr& e);

/// Substitute a rational value for s.
Expr substitute_s(const Expr& e, const Rational& value);

bool equal_exact(const Expr& a, const Expr& b);

}  // namespace moserlab::poly
