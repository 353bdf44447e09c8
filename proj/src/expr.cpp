#include "moserlab/expr.hpp"

#include "moserlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace moserlab::poly {

Expr Expr::constant(const Rational& c) { return coefficient(Poly{c}); }

Expr Expr::coefficient(const Poly& c_of_s) {
    Expr e;
    e.add_term(TermKey{0, 0, 0}, c_of_s);
    return e;
}

Expr Expr::s() { return coefficient(Poly::x()); }

Expr Expr::t() { return term(TermKey{1, 0, 1}, Poly{1}); }

Expr Expr::abs_t() { return term(TermKey{0, 0, 1}, Poly{1}); }

Expr Expr::sign_t() { return term(TermKey{1, 0, 0}, Poly{1}); }

Expr Expr::abs_pow(const Rational& a, const Rational& q) { return term(TermKey{0, a, q}, Poly{1}); }

Expr Expr::term(const TermKey& key, const Poly& coeff) {
    if (key.sign_power != 0 && key.sign_power != 1) throw DomainError("sign power must be 0 or 1");
    Expr e;
    e.add_term(key, coeff);
    return e;
}

void Expr::add_term(const TermKey& key, const Poly& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Expr& Expr::operator+=(const Expr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

Expr& Expr::operator-=(const Expr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

Expr& Expr::operator*=(const Expr& o) {
    Expr r;
    for (const auto& [k1, c1] : terms_) {
        for (const auto& [k2, c2] : o.terms_) {
            TermKey k{(k1.sign_power + k2.sign_power) % 2, k1.a + k2.a, k1.q + k2.q};
            r.add_term(k, c1 * c2);
        }
    }
    terms_ = std::move(r.terms_);
    return *this;
}

Expr Expr::operator-() const {
    Expr r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

Expr Expr::pow(int n) const {
    if (n >= 0) {
        Expr result = constant(1);
        Expr base = *this;
        auto e = static_cast<unsigned>(n);
        while (e != 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e != 0) base *= base;
        }
        return result;
    }
    if (terms_.size() != 1) throw DomainError("negative power of a multi-term expression");
    const auto& [k, c] = *terms_.begin();
    if (!c.is_constant()) throw DomainError("negative power of an s-dependent coefficient");
    const Rational inv = Rational(1) / c.coeff(0);
    const Rational m = -n;
    // sign^(-j) = sign^j for t != 0.
    TermKey key{k.sign_power * ((-n) % 2), -k.a * m, -k.q * m};
    return term(key, Poly{pow_int(inv, -n)});
}

double Expr::evaluate(double s, double t) const {
    const double at = std::fabs(t);
    const double sg = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
    double sum = 0.0;
    for (const auto& [k, c] : terms_) {
        const double e = to_double(k.a) * s + to_double(k.q);
        double v = c.eval(s) * std::pow(at, e);
        if (k.sign_power == 1) v *= sg;
        sum += v;
    }
    return sum;
}

std::string Expr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str("s") << ")";
        if (k.sign_power == 1) os << "*sign(t)";
        if (k.a != 0 || k.q != 0) {
            os << "*|t|^(";
            if (k.a != 0) os << to_string(k.a) << "*s" << (k.q != 0 ? " + " : "");
            if (k.q != 0 || k.a == 0) os << to_string(k.q);
            os << ")";
        }
    }
    return os.str();
}

Expr expand_collect(const Expr& e) { return e; }

namespace {

std::optional<std::vector<Poly>> collect_t(const Expr& e, bool nonneg) {
    std::vector<Poly> out;
    for (const auto& [k, c] : e.terms()) {
        if (k.a != 0 || !is_integer(k.q) || k.q < 0) return std::nullopt;
        const auto n = static_cast<std::size_t>(boost::multiprecision::numerator(k.q).convert_to<long long>());
        if (!nonneg && static_cast<int>(n % 2) != k.sign_power) return std::nullopt;
        if (out.size() <= n) out.resize(n + 1);
        out[n] += c;
    }
    return out;
}

}  // namespace

std::optional<std::vector<Poly>> coefficients_in_t(const Expr& e) { return collect_t(e, false); }

std::optional<std::vector<Poly>> coefficients_in_t_nonneg(const Expr& e) { return collect_t(e, true); }

std::vector<Expr> coefficients_in_s(const Expr& e) {
    std::vector<Expr> out;
    for (const auto& [k, c] : e.terms()) {
        const auto& cs = c.coeffs();
        if (out.size() < cs.size()) out.resize(cs.size());
        for (std::size_t j = 0; j < cs.size(); ++j) out[j] += Expr::term(k, Poly{cs[j]});
    }
    return out;
}

std::optional<Poly> univariate(const Expr& e, bool nonneg_half_line) {
    auto coeffs = collect_t(e, nonneg_half_line);
    if (!coeffs) return std::nullopt;
    std::vector<Rational> out(coeffs->size());
    for (std::size_t n = 0; n < coeffs->size(); ++n) {
        const Poly& c = (*coeffs)[n];
        if (!c.is_constant()) return std::nullopt;
        out[n] = c.coeff(0);
    }
    return Poly(std::move(out));
}

Expr differentiate(const Expr& e) {
    Expr r;
    for (const auto& [k, c] : e.terms()) {
        // d/dt |t|^x = x*sign(t)*|t|^(x-1); sign'(t) = 0 away from 0.
        const Poly exponent{k.q, k.a};
        TermKey dk{(k.sign_power + 1) % 2, k.a, k.q - 1};
        r += Expr::term(dk, c * exponent);
    }
    return r;
}

Expr differentiate_s(const Expr& e) {
    Expr r;
    for (const auto& [k, c] : e.terms()) {
        if (k.a != 0) throw DomainError("d/ds of an s-dependent exponent is outside the expression class");
        r += Expr::term(k, c.derivative());
    }
    return r;
}

Expr on_nonneg(const Expr& e) {
    Expr r;
    for (const auto& [k, c] : e.terms()) r += Expr::term(TermKey{0, k.a, k.q}, c);
    return r;
}

Poly at_one(const Expr& e) {
    Poly r;
    for (const auto& [k, c] : e.terms()) r += c;
    return r;
}

Expr substitute_s(const Expr& e, const Rational& value) {
    Expr r;
    for (const auto& [k, c] : e.terms()) {
        r += Expr::term(TermKey{k.sign_power, 0, k.a * value + k.q}, Poly{c.eval(value)});
    }
    return r;
}

bool equal_exact(const Expr& a, const Expr& b) { return a == b; }

}  // namespace moserlab::poly
