#include "moserlab/positivity.hpp"

#include "moserlab/errors.hpp"

#include <algorithm>

namespace moserlab::poly {

namespace {

struct Cell {
    Rational lo;
    Rational hi;
    int depth;
};

Rational abs_max(const Interval& iv) {
    Rational a = iv.lo < 0 ? Rational(-iv.lo) : iv.lo;
    Rational b = iv.hi < 0 ? Rational(-iv.hi) : iv.hi;
    return std::max(a, b);
}

}  // namespace

PositivityResult certify_positive(const Poly& p, const Rational& lo, const Rational& hi,
                                  const Rational& threshold, int max_depth) {
    if (!(lo < hi)) throw DomainError("certify_positive needs lo < hi");
    if (max_depth < 0) throw DomainError("max_depth must be nonnegative");

    PositivityResult result;
    for (const Rational& end : {lo, hi}) {
        if (p.eval(end) <= threshold) {
            result.status = PositivityStatus::counterexample;
            result.witness = end;
            return result;
        }
    }

    const Poly dp = p.derivative();
    PositivityCertificate cert;
    bool have_bound = false;
    std::vector<Cell> stack{{lo, hi, 0}};
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        result.depth_reached = std::max(result.depth_reached, c.depth);
        const Rational mid = (c.lo + c.hi) / 2;
        const Rational half = (c.hi - c.lo) / 2;
        const Rational value = p.eval(mid);
        if (value <= threshold) {
            result.status = PositivityStatus::counterexample;
            result.witness = mid;
            return result;
        }
        const Rational lower = value - half * abs_max(enclose(dp, Interval{c.lo, c.hi}));
        if (lower > threshold) {
            ++cert.leaves;
            if (!have_bound || lower < cert.min_lower_bound) cert.min_lower_bound = lower;
            have_bound = true;
            continue;
        }
        if (c.depth >= max_depth) {
            result.status = PositivityStatus::inconclusive;
            return result;
        }
        stack.push_back({mid, c.hi, c.depth + 1});
        stack.push_back({c.lo, mid, c.depth + 1});
    }
    cert.depth_reached = result.depth_reached;
    result.status = PositivityStatus::certified;
    result.certificate = cert;
    return result;
}

SosFloorResult check_sos_floor(const Poly& p, const std::vector<SquareTerm>& squares,
                               const Rational& floor, const Rational& threshold) {
    SosFloorResult r;
    Poly sum = Poly::constant(floor);
    r.weights_nonnegative = true;
    for (const auto& sq : squares) {
        if (sq.weight < 0) r.weights_nonnegative = false;
        sum += sq.weight * (sq.base * sq.base);
    }
    r.residual = p - sum;
    r.floor = floor;
    r.clears_threshold = floor > threshold;
    return r;
}

OrthantResult check_orthant(const Expr& e, const Rational& t0, const Rational& s0, const Rational& threshold) {
    auto coeffs = coefficients_in_t_nonneg(e);
    if (!coeffs) throw DomainError("orthant check needs a polynomial in t");
    if (t0 < 0) throw DomainError("orthant check lives on t >= 0");

    // Coefficients of u^i, each a polynomial in s.
    std::vector<Poly> in_u;
    for (std::size_t n = coeffs->size(); n-- > 0;) {
        std::vector<Poly> next(in_u.size() + 1);
        for (std::size_t i = 0; i < in_u.size(); ++i) {
            next[i] += in_u[i] * Poly{t0};
            next[i + 1] += in_u[i];
        }
        next[0] += (*coeffs)[n];
        in_u = std::move(next);
    }

    OrthantResult r;
    r.coefficients_nonnegative = true;
    for (std::size_t i = 0; i < in_u.size(); ++i) {
        const Poly shifted = in_u[i].shift(s0);
        for (const auto& c : shifted.coeffs()) {
            if (c < 0) r.coefficients_nonnegative = false;
        }
        if (i == 0) r.corner_value = shifted.coeff(0);
    }
    r.clears_threshold = r.corner_value > threshold;
    return r;
}

}  // namespace moserlab::poly
